#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "t2t/units.hpp"

namespace t2t::codec {

inline constexpr std::uint8_t kPreambleByte = 0xBB;
inline constexpr std::uint8_t kStartFrameDelimiter = 0xAA;
inline constexpr std::uint8_t kBroadcastType = 0xFF;
inline constexpr std::size_t kBodyBytes = 8;
inline constexpr std::size_t kOnAirBytes = 11;  // SFD + body + CRC
inline constexpr std::size_t kDefaultPreambleDetectBits = 16;

struct Frame {
  std::uint8_t sender_id = 0;
  std::uint8_t receiver_id = 0;
  std::uint8_t message_type = kBroadcastType;
  std::uint8_t message_id = 0;
  std::array<std::uint8_t, 4> payload{};

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final xor.
std::uint16_t crc16(std::span<const std::uint8_t> bytes);

std::array<std::uint8_t, kBodyBytes> serialize_body(const Frame& f);
/// SFD, body and big-endian CRC: the on-air bytes after the preamble.
std::array<std::uint8_t, kOnAirBytes> serialize(const Frame& f);
std::string hex_dump(const Frame& f);

/// Bit length in SMCLK cycles; only the three rates the tag firmware supports.
class BitTiming {
 public:
  static constexpr std::uint32_t kCycles10k = 1600;
  static constexpr std::uint32_t kCycles1k = 16000;
  static constexpr std::uint32_t kCycles512 = 31250;

  constexpr BitTiming() = default;
  explicit BitTiming(std::uint32_t bit_length_cycles);

  std::uint32_t bit_length_cycles() const { return cycles_; }
  double data_rate_bps() const { return 16e6 / cycles_; }
  Ticks bit_duration() const { return Ticks{cycles_}; }
  Ticks half_symbol() const { return Ticks{cycles_ / 2}; }

  friend bool operator==(const BitTiming&, const BitTiming&) = default;

 private:
  std::uint32_t cycles_ = kCycles10k;
};

/// Baseband trace: one level (0/1) per FM0 half-symbol.
struct SymbolStream {
  std::vector<std::uint8_t> levels;
  BitTiming timing;

  Ticks duration() const {
    return Ticks{static_cast<std::int64_t>(levels.size()) * timing.half_symbol().count()};
  }
};

/// FM0 (EPC Gen2 style): the level inverts at every symbol boundary, and a
/// data-0 inverts again mid-symbol. `prior_level` is the level before the
/// first symbol.
std::vector<std::uint8_t> fm0_encode(std::span<const std::uint8_t> bits,
                                     std::uint8_t prior_level = 0);

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes);

std::size_t preamble_bytes_for(double preamble_ms, const BitTiming& timing);

/// Preamble of 0xBB bytes covering at least `preamble_ms`, then SFD, body, CRC.
SymbolStream encode_frame(const Frame& f, double preamble_ms, const BitTiming& timing);

struct DecodedFrame {
  Frame frame;
  bool crc_ok = false;
  std::uint16_t received_crc = 0;
  std::size_t start_half_symbol = 0;  // first half-symbol of the SFD
};

struct DecodeDiagnostics {
  std::size_t false_triggers = 0;   // SFD pattern seen without a qualified preamble
  std::size_t preamble_aborts = 0;  // qualified preamble broken before an SFD
  std::size_t rx_timeouts = 0;      // stream ended inside a frame
  std::size_t crc_failures = 0;
  std::size_t fm0_violations = 0;   // missing boundary transitions inside frames
};

struct DecodeResult {
  std::vector<DecodedFrame> frames;
  DecodeDiagnostics diagnostics;
};

struct DecodeOptions {
  std::size_t preamble_detect_bits = kDefaultPreambleDetectBits;
};

/// Finds preamble + SFD, decodes FM0 and checks CRC. Half-symbol alignment is
/// recovered from the stream and the decoder ignores polarity.
DecodeResult decode_stream(std::span<const std::uint8_t> levels, const BitTiming& timing,
                           const DecodeOptions& options = {});

/// Run-length trace "<bit_cycles> <first_level> <run> <run> ...".
std::string to_rle(const SymbolStream& s);
SymbolStream from_rle(std::string_view text);

}  // namespace t2t::codec
