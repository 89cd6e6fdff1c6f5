#include "t2t/frame_codec.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace t2t::codec {

namespace {

constexpr std::array<std::uint8_t, 8> kPreambleBits = {1, 0, 1, 1, 1, 0, 1, 1};  // 0xBB
constexpr std::array<std::uint8_t, 8> kSfdBits = {1, 0, 1, 0, 1, 0, 1, 0};       // 0xAA

struct BitView {
  std::vector<std::uint8_t> bits;
  std::vector<std::uint8_t> boundary_ok;
  std::size_t offset;  // half-symbol index of bit 0
  std::size_t violations = 0;
};

BitView slice_bits(std::span<const std::uint8_t> h, std::size_t offset) {
  BitView v{{}, {}, offset};
  if (h.size() < offset + 2) return v;
  const std::size_t count = (h.size() - offset) / 2;
  v.bits.reserve(count);
  v.boundary_ok.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = offset + 2 * k;
    v.bits.push_back(h[i] == h[i + 1] ? 1 : 0);
    const bool ok = i == 0 || h[i] != h[i - 1];
    v.boundary_ok.push_back(ok ? 1 : 0);
    if (!ok) ++v.violations;
  }
  return v;
}

bool matches_at(const BitView& v, std::size_t k, const std::array<std::uint8_t, 8>& pattern) {
  if (k + 8 > v.bits.size()) return false;
  for (std::size_t j = 0; j < 8; ++j) {
    if (v.bits[k + j] != pattern[j]) return false;
  }
  return true;
}

std::uint8_t byte_at(const BitView& v, std::size_t k) {
  std::uint8_t b = 0;
  for (std::size_t j = 0; j < 8; ++j) b = static_cast<std::uint8_t>((b << 1) | v.bits[k + j]);
  return b;
}

DecodeResult search_frames(const BitView& v, const DecodeOptions& options) {
  DecodeResult out;
  auto& diag = out.diagnostics;
  const std::size_t n = v.bits.size();
  std::array<std::size_t, 8> run{};
  bool qualified = false;
  std::size_t rotation = 0;

  std::size_t k = 0;
  while (k < n) {
    if (!qualified) {
      if (matches_at(v, k, kSfdBits)) ++diag.false_triggers;
      for (std::size_t r = 0; r < 8; ++r) {
        const bool m = v.boundary_ok[k] && v.bits[k] == kPreambleBits[(k + r) % 8];
        run[r] = m ? run[r] + 1 : 0;
        if (run[r] >= options.preamble_detect_bits) {
          qualified = true;
          rotation = r;
        }
      }
      ++k;
      continue;
    }

    // 0xBB repeats every 4 bits, so the byte phase is only known modulo 4.
    if ((k + rotation) % 4 == 0 && matches_at(v, k, kSfdBits)) {
      const std::size_t body = k + 8;
      if (body + 8 * (kBodyBytes + 2) > n) {
        ++diag.rx_timeouts;
        break;
      }
      std::array<std::uint8_t, kBodyBytes> bytes{};
      for (std::size_t i = 0; i < kBodyBytes; ++i) bytes[i] = byte_at(v, body + 8 * i);
      const std::size_t crc_at = body + 8 * kBodyBytes;
      const auto received =
          static_cast<std::uint16_t>((byte_at(v, crc_at) << 8) | byte_at(v, crc_at + 8));
      for (std::size_t i = k; i < crc_at + 16; ++i) {
        if (!v.boundary_ok[i]) ++diag.fm0_violations;
      }
      DecodedFrame d;
      d.frame.sender_id = bytes[0];
      d.frame.receiver_id = bytes[1];
      d.frame.message_type = bytes[2];
      d.frame.message_id = bytes[3];
      for (std::size_t i = 0; i < 4; ++i) d.frame.payload[i] = bytes[4 + i];
      d.received_crc = received;
      d.crc_ok = crc16(bytes) == received;
      d.start_half_symbol = v.offset + 2 * k;
      if (!d.crc_ok) ++diag.crc_failures;
      out.frames.push_back(d);

      k = crc_at + 16;
      qualified = false;
      run.fill(0);
      continue;
    }

    const bool m = v.boundary_ok[k] && v.bits[k] == kPreambleBits[(k + rotation) % 8];
    if (m) {
      ++k;
    } else {
      ++diag.preamble_aborts;
      qualified = false;
      run.fill(0);
    }
  }
  return out;
}

}  // namespace

std::uint16_t crc16(std::span<const std::uint8_t> bytes) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : bytes) {
    crc ^= static_cast<std::uint16_t>(byte << 8);
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
  }
  return crc;
}

std::array<std::uint8_t, kBodyBytes> serialize_body(const Frame& f) {
  return {f.sender_id,  f.receiver_id, f.message_type, f.message_id,
          f.payload[0], f.payload[1],  f.payload[2],   f.payload[3]};
}

std::array<std::uint8_t, kOnAirBytes> serialize(const Frame& f) {
  const auto body = serialize_body(f);
  const std::uint16_t crc = crc16(body);
  std::array<std::uint8_t, kOnAirBytes> out{};
  out[0] = kStartFrameDelimiter;
  for (std::size_t i = 0; i < kBodyBytes; ++i) out[1 + i] = body[i];
  out[9] = static_cast<std::uint8_t>(crc >> 8);
  out[10] = static_cast<std::uint8_t>(crc & 0xFF);
  return out;
}

std::string hex_dump(const Frame& f) {
  const auto bytes = serialize(f);
  std::string s;
  char buf[4];
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%02X", bytes[i]);
    if (i) s += ' ';
    s += buf;
  }
  return s;
}

BitTiming::BitTiming(std::uint32_t bit_length_cycles) : cycles_(bit_length_cycles) {
  if (cycles_ != kCycles10k && cycles_ != kCycles1k && cycles_ != kCycles512) {
    throw ConfigError("bit length must be 1600, 16000 or 31250 cycles");
  }
}

std::vector<std::uint8_t> fm0_encode(std::span<const std::uint8_t> bits,
                                     std::uint8_t prior_level) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size() * 2);
  std::uint8_t level = prior_level ? 1 : 0;
  for (std::uint8_t bit : bits) {
    level ^= 1;  // boundary inversion
    out.push_back(level);
    if (bit == 0) level ^= 1;
    out.push_back(level);
  }
  return out;
}

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t b : bytes) {
    for (int i = 7; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((b >> i) & 1));
  }
  return bits;
}

std::size_t preamble_bytes_for(double preamble_ms, const BitTiming& timing) {
  if (!(preamble_ms >= 0.0)) throw ConfigError("preamble duration must be non-negative");
  const double bits = preamble_ms * 1e-3 * timing.data_rate_bps();
  return static_cast<std::size_t>(std::ceil(bits / 8.0 - 1e-9));
}

SymbolStream encode_frame(const Frame& f, double preamble_ms, const BitTiming& timing) {
  std::vector<std::uint8_t> bytes(preamble_bytes_for(preamble_ms, timing), kPreambleByte);
  const auto air = serialize(f);
  bytes.insert(bytes.end(), air.begin(), air.end());
  return SymbolStream{fm0_encode(bytes_to_bits(bytes)), timing};
}

DecodeResult decode_stream(std::span<const std::uint8_t> levels, const BitTiming& timing,
                           const DecodeOptions& options) {
  (void)timing;
  // Symbol alignment: the correct phase shows a transition at every boundary.
  BitView even = slice_bits(levels, 0);
  BitView odd = slice_bits(levels, 1);
  const BitView& chosen = (odd.bits.size() > 0 && odd.violations < even.violations) ? odd : even;
  return search_frames(chosen, options);
}

std::string to_rle(const SymbolStream& s) {
  std::ostringstream out;
  out << s.timing.bit_length_cycles() << ' ' << (s.levels.empty() ? 0 : int{s.levels.front()});
  std::size_t i = 0;
  while (i < s.levels.size()) {
    std::size_t j = i;
    while (j < s.levels.size() && s.levels[j] == s.levels[i]) ++j;
    out << ' ' << (j - i);
    i = j;
  }
  out << '\n';
  return out.str();
}

SymbolStream from_rle(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::uint32_t cycles = 0;
  int level = 0;
  if (!(in >> cycles >> level) || (level != 0 && level != 1)) {
    throw ConfigError("malformed RLE trace header");
  }
  SymbolStream s{{}, BitTiming(cycles)};
  std::size_t run = 0;
  while (in >> run) {
    if (run == 0) throw ConfigError("zero-length run in RLE trace");
    s.levels.insert(s.levels.end(), run, static_cast<std::uint8_t>(level));
    level ^= 1;
  }
  if (!in.eof()) throw ConfigError("malformed RLE trace body");
  return s;
}

}  // namespace t2t::codec
