#pragma once

// System model of a downlink mmWave cellular network: PPP base stations,
// sectored antennas, and an equivalent LOS ball. Everything here is linear
// scale and SI units (meters, BS per square meter, radians); dB and degrees
// only appear at the CLI boundary.

#include <array>
#include <cstddef>
#include <numbers>

namespace mmw {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

double db_to_linear(double db);
double linear_to_db(double linear);
double degrees_to_radians(double degrees);

struct NetworkParams {
  double lambda_bs = 1e-4;   // BS per m^2
  double ball_radius = 141;  // R_B, meters
  double alpha_los = 2.1;
  double alpha_nlos = 4.0;

  /// Throws ParameterError unless lambda_bs >= 0, ball_radius > 0 and
  /// alpha_nlos >= alpha_los > 1.
  void validate() const;
};

struct AntennaPattern {
  double main_gain = 10.0;  // M, linear
  double side_gain = 0.1;   // m, linear
  double beamwidth = kPi / 12.0;  // theta, radians

  static AntennaPattern from_db(double main_db, double side_db, double beamwidth_deg);
  /// Omnidirectional pattern: unit gain everywhere.
  static AntennaPattern omni();
  void validate() const;
};

enum class GainClass : std::size_t { MM = 0, Mm = 1, mm = 2 };

struct GainEntry {
  double gain = 0;
  double probability = 0;
};

/// Effective antenna gain as a three-point distribution over MM, Mm and mm.
struct GainDistribution {
  std::array<GainEntry, 3> entries{};

  const GainEntry& operator[](GainClass c) const { return entries[static_cast<std::size_t>(c)]; }
  double mean_gain() const;
  /// Builds the distribution from the probability F that a single beam is
  /// aligned (F, F) -> MM, mixed -> Mm, neither -> mm.
  static GainDistribution from_alignment(const AntennaPattern& pattern, double aligned);
};

struct LinkBudget {
  double symbol_energy = 4.0;  // E_0
  double noise_level = 1e-6;   // N_0, variance of the complex noise
  double fading_power = 1.0;   // sigma_0 = E|h|^2
  double serving_gain = 100.0; // G_0

  /// E_0 sigma_0 / 4.
  double snr() const { return symbol_energy * fading_power / 4.0; }
  /// Sets E_0 so that snr() equals the given value (linear).
  static LinkBudget from_snr(double snr, double noise_level, double fading_power,
                             double serving_gain);
  void validate() const;
};

struct Modulation {
  int order = 2;
  double min_distance = 2.0;
  int neighbor_count = 1;

  /// Unit-energy M-PSK. BPSK has a single nearest neighbour at distance 2.
  static Modulation psk(int order);
  void validate() const;
};

GainDistribution gain_distribution(const AntennaPattern& pattern);

/// alpha_L for distance <= R_B, alpha_N beyond.
double path_loss_exponent(double distance, const NetworkParams& params);

/// Density of the distance to the nearest BS: 2 pi lambda xi exp(-pi lambda xi^2).
double serving_distance_pdf(double xi, double lambda_bs);

/// Expected number of LOS interferers of one gain class given the serving
/// distance r0: lambda p_G pi (R_B^2 - r0^2) for r0 <= R_B, zero beyond.
double expected_los_interferers(double r0, double class_probability, const NetworkParams& params);

}  // namespace mmw
