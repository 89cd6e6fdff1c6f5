#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace t2t {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Simulation clock: one tick per cycle of the tag's 16 MHz SMCLK.
using Ticks = std::chrono::duration<std::int64_t, std::ratio<1, 16'000'000>>;
inline constexpr std::int64_t kTicksPerSecond = 16'000'000;

inline double to_ms(Ticks t) { return static_cast<double>(t.count()) / 16'000.0; }
inline double to_us(Ticks t) { return static_cast<double>(t.count()) / 16.0; }
inline double to_seconds(Ticks t) { return static_cast<double>(t.count()) / kTicksPerSecond; }

/// Rounds a millisecond quantity to the nearest tick.
inline Ticks ms_to_ticks(double ms) { return Ticks{std::llround(ms * 16'000.0)}; }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Violated physical precondition (e.g. zero distance).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid user-supplied configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace t2t
