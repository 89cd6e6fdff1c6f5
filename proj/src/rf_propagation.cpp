#include "t2t/rf_propagation.hpp"

#include <cmath>

namespace t2t::rf {

namespace {

double require_positive_distance(Position a, Position b, const char* what) {
  const double d = distance(a, b);
  if (!(d > 0.0)) {
    throw DomainError(std::string(what) + ": coincident positions");
  }
  return d;
}

double wrap_degrees(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

}  // namespace

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

RfEnvironment RfEnvironment::standard() {
  return RfEnvironment(868e6, 0.4, 0.9, dbm_to_watts(33.0), dbm_to_watts(-50.0),
                       db_to_linear(0.0), db_to_linear(4.0), -45.0, 40.0,
                       GainPattern::kIsotropic);
}

RfEnvironment::RfEnvironment(double carrier_frequency_hz, double k0, double k1,
                             double exciter_power_w, double tag_sensitivity_w, double tag_gain,
                             double exciter_boresight_gain, double beam_direction_deg,
                             double beam_width_deg, GainPattern pattern, double floor_gain)
    : carrier_frequency_(carrier_frequency_hz),
      wavelength_(kSpeedOfLight / carrier_frequency_hz),
      k0_(k0),
      k1_(k1),
      exciter_power_(exciter_power_w),
      tag_sensitivity_(tag_sensitivity_w),
      tag_gain_(tag_gain),
      exciter_boresight_gain_(exciter_boresight_gain),
      beam_direction_deg_(beam_direction_deg),
      beam_width_deg_(beam_width_deg),
      pattern_(pattern),
      floor_gain_(floor_gain) {
  validate();
}

void RfEnvironment::validate() const {
  if (!(carrier_frequency_ > 0.0)) throw ConfigError("carrier frequency must be positive");
  if (!(k0_ > 0.0 && k0_ < k1_ && k1_ <= 1.0)) {
    throw ConfigError("reflection coefficients must satisfy 0 < k0 < k1 <= 1");
  }
  if (!(exciter_power_ > 0.0 && tag_sensitivity_ > 0.0 && tag_gain_ > 0.0 &&
        exciter_boresight_gain_ > 0.0 && floor_gain_ > 0.0)) {
    throw ConfigError("powers and gains must be strictly positive");
  }
  if (!(beam_width_deg_ > 0.0 && beam_width_deg_ <= 360.0)) {
    throw ConfigError("beam width must lie in (0, 360] degrees");
  }
}

RfEnvironment RfEnvironment::with_exciter_power(double watts) const {
  RfEnvironment e = *this;
  e.exciter_power_ = watts;
  e.validate();
  return e;
}

RfEnvironment RfEnvironment::with_exciter_gain(double linear) const {
  RfEnvironment e = *this;
  e.exciter_boresight_gain_ = linear;
  e.validate();
  return e;
}

RfEnvironment RfEnvironment::with_k0(double k0) const {
  RfEnvironment e = *this;
  e.k0_ = k0;
  e.validate();
  return e;
}

RfEnvironment RfEnvironment::with_gain_pattern(GainPattern pattern) const {
  RfEnvironment e = *this;
  e.pattern_ = pattern;
  return e;
}

RfEnvironment RfEnvironment::with_carrier_frequency(double hz) const {
  RfEnvironment e = *this;
  e.carrier_frequency_ = hz;
  e.wavelength_ = kSpeedOfLight / hz;
  e.validate();
  return e;
}

double exciter_gain_toward(const RfEnvironment& env, Position exciter, Position target) {
  require_positive_distance(exciter, target, "exciter_gain_toward");
  if (env.gain_pattern() == GainPattern::kIsotropic) {
    return env.exciter_boresight_gain();
  }
  const double angle = std::atan2(target.y - exciter.y, target.x - exciter.x) * 180.0 / kPi;
  const double off = std::abs(wrap_degrees(angle - env.beam_direction_deg()));
  return off <= env.beam_width_deg() / 2.0 ? env.exciter_boresight_gain() : env.floor_gain();
}

double available_power(const RfEnvironment& env, Position exciter, Position tag) {
  const double d = require_positive_distance(exciter, tag, "available_power");
  const double lambda = env.wavelength();
  const double spread = 4.0 * kPi * d;
  return env.exciter_power() * exciter_gain_toward(env, exciter, tag) * env.tag_gain() * lambda *
         lambda / (spread * spread);
}

double received_power(const RfEnvironment& env, Position exciter, Position tx, Position rx) {
  const double d = require_positive_distance(tx, rx, "received_power");
  const double reflected = env.k0() * env.tag_gain() * env.wavelength();
  const double spread = 4.0 * kPi * d;
  return available_power(env, exciter, tx) * reflected * reflected / (spread * spread);
}

bool link_alive(const RfEnvironment& env, Position exciter, Position tx, Position rx) {
  return received_power(env, exciter, tx, rx) >= env.tag_sensitivity();
}

std::optional<double> cancellation_angle(double k0, double k1, double wavelength,
                                         double d_exciter_rx, double d_exciter_tx,
                                         double d_tx_rx, double rx_gain) {
  if (!(d_exciter_rx > 0.0 && d_exciter_tx > 0.0 && d_tx_rx > 0.0)) {
    throw DomainError("cancellation_angle: distances must be positive");
  }
  const double arg =
      -(k0 + k1) * d_exciter_rx * wavelength * rx_gain / (8.0 * kPi * d_exciter_tx * d_tx_rx);
  if (arg < -1.0 || arg > 1.0) return std::nullopt;
  return std::acos(arg);
}

std::optional<double> phase_cancellation_angle(const RfEnvironment& env, Position exciter,
                                               Position tx, Position rx, double rx_gain) {
  return cancellation_angle(env.k0(), env.k1(), env.wavelength(),
                            require_positive_distance(exciter, rx, "phase_cancellation_angle"),
                            require_positive_distance(exciter, tx, "phase_cancellation_angle"),
                            require_positive_distance(tx, rx, "phase_cancellation_angle"),
                            rx_gain);
}

double phase_difference_of_arrival(const RfEnvironment& env, Position exciter, Position tx,
                                   Position rx) {
  const double d_etx = require_positive_distance(exciter, tx, "phase_difference_of_arrival");
  const double d_link = require_positive_distance(tx, rx, "phase_difference_of_arrival");
  const double d_erx = distance(exciter, rx);
  const double excess = (d_etx + d_link) - d_erx;
  double phase = std::fmod(kTwoPi * excess / env.wavelength(), kTwoPi);
  if (phase < 0.0) phase += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to 2pi.
  if (phase >= kTwoPi) phase = 0.0;
  return phase;
}

bool is_cancelled(double phase, std::optional<double> critical_angle, double band) {
  if (!critical_angle) return false;
  auto circular = [](double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return d > kPi ? kTwoPi - d : d;
  };
  return circular(phase, *critical_angle) < band || circular(phase, -*critical_angle) < band;
}

bool link_cancelled(const RfEnvironment& env, Position exciter, Position tx, Position rx,
                    double phase_offset, double band) {
  const double phase = phase_difference_of_arrival(env, exciter, tx, rx) + phase_offset;
  return is_cancelled(phase, phase_cancellation_angle(env, exciter, tx, rx, env.tag_gain()),
                      band);
}

}  // namespace t2t::rf
