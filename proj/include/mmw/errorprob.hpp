#pragma once

// Error probabilities of the typical downlink user.
//
// Pairwise error between s0 and s0' reduces, by circular symmetry of the
// interference-plus-noise U, to Re{U} < -sqrt(G0 E0) |h0| Delta / (2 r0^alpha_L),
// whose probability follows from the CF of U by Gil-Pelaez inversion. The
// average over Rayleigh |h0| is closed-form; the average over the serving
// distance is a second integral.

#include <array>

#include "mmw/interference_cf.hpp"
#include "mmw/model.hpp"
#include "mmw/quadrature.hpp"

namespace mmw {

enum class NetworkMode {
  mmwave,  // sectored antennas and LOS ball
  omni,    // unit gains, every BS LOS with alpha_L
};

struct Scenario {
  NetworkParams network;
  AntennaPattern pattern;
  LinkBudget budget;
  Modulation modulation = Modulation::psk(2);
  NetworkMode mode = NetworkMode::mmwave;
  // When false the aggregate interference is dropped and only noise remains;
  // the serving distance is still drawn from the PPP with density lambda.
  bool interference = true;

  /// mmWave scenario with perfect alignment: G0 = M^2, E0 set from the SNR.
  static Scenario mmwave(const NetworkParams& network, const AntennaPattern& pattern, double snr,
                         double noise_level, const Modulation& modulation);
  /// Omnidirectional baseline at the same SNR: unit gains, all BSs LOS.
  static Scenario omnidirectional(const NetworkParams& network, double snr, double noise_level,
                                  const Modulation& modulation);

  GainDistribution interferer_gains() const;
  InterferenceGeometry geometry() const;
  CfContext context(double serving_distance) const;
  void validate() const;
};

struct BeamErrorModel {
  double sigma_be = 0;  // radians

  static BeamErrorModel from_degrees(double sigma_deg);
  /// P(|eps| <= theta / 2) = erf(theta / (2 sqrt(2) sigma)); 1 when sigma = 0.
  double alignment_probability(double beamwidth) const;
  void validate() const;
};

struct ErrorProbConfig {
  QuadratureConfig inner{1e-10, 1e-15, 4000, 1e-12};
  QuadratureConfig outer{1e-8, 1e-14, 4000, 1e-12};
  double serving_tail_mass = 1e-10;  // truncation of the serving-distance integral
};

/// Gil-Pelaez PEP for fixed |h0| and r0. Clamped to [0, 1/2] only when the
/// excursion is within the integration tolerance; otherwise NumericFailure.
double pep_conditional(double h0_mag, double r0, double delta, const Scenario& scenario,
                       const ErrorProbConfig& cfg = {});

/// PEP averaged over Rayleigh |h0| for fixed r0.
double pep_rayleigh(double r0, double delta, const Scenario& scenario,
                    const ErrorProbConfig& cfg = {});

/// Radius beyond which the serving-distance density carries mass below
/// cfg.serving_tail_mass: sqrt(-ln(mass) / (pi lambda)).
double serving_distance_cutoff(double lambda_bs, double tail_mass);

/// PEP averaged over |h0| and the serving distance. Requires lambda > 0.
double apep(double delta, const Scenario& scenario, const ErrorProbConfig& cfg = {});

struct AsepResult {
  double value = 0;
  double unclamped = 0;
  bool clamped = false;  // nearest-neighbour estimate exceeded 1
};

/// k_dmin * apep(Delta_min).
AsepResult asep(const Scenario& scenario, const ErrorProbConfig& cfg = {});

/// Gain distribution of the serving link under beamsteering error.
GainDistribution misalignment_gain_pdf(const BeamErrorModel& model, const AntennaPattern& pattern);

struct BeamErrorBreakdown {
  double value = 0;
  std::array<double, 3> branch{};   // APEP with G0 = MM, Mm, mm
  std::array<double, 3> weight{};
};

/// Mixture of APEPs over the serving gain; interference is unchanged.
BeamErrorBreakdown apep_with_beam_error_detail(double delta, const Scenario& scenario,
                                               const BeamErrorModel& model,
                                               const ErrorProbConfig& cfg = {});
double apep_with_beam_error(double delta, const Scenario& scenario, const BeamErrorModel& model,
                            const ErrorProbConfig& cfg = {});

/// Noise-only PEP for fixed |h0|, r0: Q(sqrt(G0 E0 Delta^2 h0^2 / (2 N0 r0^{2 alpha_L}))).
double pep_noise_only(double h0_mag, double r0, double delta, const Scenario& scenario);

/// Serving-link decision threshold sqrt(G0 E0) Delta h0 / (2 r0^alpha_L).
double decision_threshold(double h0_mag, double r0, double delta, const Scenario& scenario);

}  // namespace mmw
