#pragma once

#include <optional>

#include "t2t/units.hpp"

namespace t2t::rf {

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b);

enum class GainPattern { kIsotropic, kSector };

/// Physical-layer parameters shared by every tag and the exciter(s).
/// All powers and gains are linear (watts, unitless).
class RfEnvironment {
 public:
  /// Default parameter set: 868 MHz, k=(0.4, 0.9),
  /// P_E=33 dBm, P_s=-50 dBm, G=0 dBi, G_E=4 dBi, beam -45 deg / 40 deg wide.
  static RfEnvironment standard();

  RfEnvironment(double carrier_frequency_hz, double k0, double k1, double exciter_power_w,
                double tag_sensitivity_w, double tag_gain, double exciter_boresight_gain,
                double beam_direction_deg, double beam_width_deg, GainPattern pattern,
                double floor_gain = 0.01);

  double carrier_frequency() const { return carrier_frequency_; }
  double wavelength() const { return wavelength_; }
  double k0() const { return k0_; }
  double k1() const { return k1_; }
  double exciter_power() const { return exciter_power_; }
  double tag_sensitivity() const { return tag_sensitivity_; }
  double tag_gain() const { return tag_gain_; }
  double exciter_boresight_gain() const { return exciter_boresight_gain_; }
  double beam_direction_deg() const { return beam_direction_deg_; }
  double beam_width_deg() const { return beam_width_deg_; }
  GainPattern gain_pattern() const { return pattern_; }
  double floor_gain() const { return floor_gain_; }

  RfEnvironment with_exciter_power(double watts) const;
  RfEnvironment with_exciter_gain(double linear) const;
  RfEnvironment with_k0(double k0) const;
  RfEnvironment with_gain_pattern(GainPattern pattern) const;
  RfEnvironment with_carrier_frequency(double hz) const;

 private:
  void validate() const;

  double carrier_frequency_;
  double wavelength_;
  double k0_;
  double k1_;
  double exciter_power_;
  double tag_sensitivity_;
  double tag_gain_;
  double exciter_boresight_gain_;
  double beam_direction_deg_;
  double beam_width_deg_;
  GainPattern pattern_;
  double floor_gain_;
};

double exciter_gain_toward(const RfEnvironment& env, Position exciter, Position target);

/// Carrier power available for backscatter at a tag (Friis from the exciter).
double available_power(const RfEnvironment& env, Position exciter, Position tag);

/// Power received at `rx` from a backscattering `tx`. Uses k0, so it is a
/// lower bound on the received power.
double received_power(const RfEnvironment& env, Position exciter, Position tx, Position rx);

bool link_alive(const RfEnvironment& env, Position exciter, Position tx, Position rx);

/// Critical phase difference of arrival from explicit geometry:
///   cos(theta) = -(k0+k1) * lambda * rx_gain * d_exciter_rx / (8 pi d_exciter_tx d_tx_rx)
/// Empty when the arccos argument leaves [-1, 1]: no cancellation angle exists.
std::optional<double> cancellation_angle(double k0, double k1, double wavelength,
                                         double d_exciter_rx, double d_exciter_tx,
                                         double d_tx_rx, double rx_gain);

std::optional<double> phase_cancellation_angle(const RfEnvironment& env, Position exciter,
                                               Position tx, Position rx, double rx_gain);

/// Phase of the backscattered path relative to the direct carrier at `rx`,
/// reduced into [0, 2pi).
double phase_difference_of_arrival(const RfEnvironment& env, Position exciter, Position tx,
                                   Position rx);

inline constexpr double kDefaultCancellationBand = 0.2;  // rad

/// True when `phase` lies within `band` of the cancellation angle (either
/// branch of the arccos).
bool is_cancelled(double phase, std::optional<double> critical_angle,
                  double band = kDefaultCancellationBand);

/// Cancellation test for a transmission; `phase_offset` is 0 for a plain
/// frame and pi/2 for the phase-shifted copy.
bool link_cancelled(const RfEnvironment& env, Position exciter, Position tx, Position rx,
                    double phase_offset = 0.0, double band = kDefaultCancellationBand);

}  // namespace t2t::rf
