#pragma once

// Monte Carlo simulation of the downlink network, used as the reference for
// the analytical pipeline. Each trial draws a fresh snapshot: serving
// distance (or a fixed r0), Rayleigh |h0|, a Poisson number of interferers
// uniformly on the annulus [r0, W], their gain classes, path-loss exponents,
// fading and symbol phases, and complex Gaussian noise.
//
// Trial i uses a generator seeded from (seed, i) and trials are grouped in
// fixed batches merged in index order, so results are bit-identical for any
// number of worker threads.

#include <cstdint>
#include <optional>
#include <vector>

#include "mmw/errorprob.hpp"
#include "mmw/model.hpp"
#include "mmw/rng.hpp"

namespace mmw {

struct McConfig {
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  // Minimum simulation radius in meters; the per-trial window is the larger
  // of this and the radius that meets the truncation tolerance.
  double window_radius = 0;
  std::uint64_t batch = 4096;  // trials per work unit
  unsigned jobs = 1;           // worker threads; 0 = hardware concurrency
  // Interference power beyond the window, relative to the power of the
  // interferers beyond max(r0, R_B), must stay below this.
  double truncation_tolerance = 1e-6;
  // Looser tolerance for the all-LOS baseline, whose alpha_L tail decays
  // slowly; the remainder is covered by the Gaussian tail term.
  double omni_truncation_tolerance = 1e-3;
  // Add a zero-mean Gaussian with the variance of the truncated tail.
  bool tail_compensation = true;

  void validate() const;
};

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
};

struct Interferer {
  double radius = 0;
  GainClass gain_class = GainClass::mm;
  double gain = 0;
  double alpha = 0;
  double magnitude = 0;      // |h_i|
  double fading_phase = 0;   // radians
  double symbol_phase = 0;   // radians
  /// Re{sqrt(G E0) r^{-alpha} h s}.
  double real_part(double symbol_energy) const;
};

struct Snapshot {
  double serving_distance = 0;
  double window_radius = 0;
  std::vector<Interferer> interferers;
};

/// Per-trial simulation radius for serving distance r0.
double window_radius_for(double r0, const Scenario& scenario, const McConfig& cfg);

/// Interference power beyond `window` relative to the power of interferers
/// beyond max(r0, R_B) (all-LOS: beyond r0), from the path-loss integral.
double truncated_power_ratio(double window, double r0, const Scenario& scenario);

/// Variance of Re{I} contributed by interferers beyond `window`.
double truncated_tail_variance(double window, const Scenario& scenario);

/// Draws one network snapshot; r0 is drawn from the serving-distance density
/// when not given.
Snapshot sample_realization(Xoshiro256ss& rng, const Scenario& scenario,
                            std::optional<double> r0, const McConfig& cfg = {});

/// Pairwise error: Re{U} < -sqrt(G0 E0) Delta |h0| / (2 r0^alpha_L). Unset
/// h0_mag / r0 are drawn per trial (Rayleigh / serving-distance density).
McEstimate estimate_pep(const McConfig& cfg, std::optional<double> h0_mag,
                        std::optional<double> r0, double delta, const Scenario& scenario);

/// As estimate_pep with |h0| and r0 random, and the serving gain drawn per
/// trial from the beamsteering-error gain distribution.
McEstimate estimate_pep_with_beam_error(const McConfig& cfg, double delta,
                                        const Scenario& scenario, const BeamErrorModel& model);

/// Nearest-neighbour ASEP estimate: k_dmin times the pairwise error rate at
/// Delta_min, with |h0| and r0 random. This checks the nearest-neighbour
/// quantity, not the exact M-PSK symbol error rate.
McEstimate estimate_asep(const McConfig& cfg, const Scenario& scenario,
                         const BeamErrorModel& model = {});

struct CdfPoint {
  double u = 0;
  double value = 0;
  double lower = 0;  // DKW band at the configured confidence
  double upper = 0;
};

/// Empirical CDF of Re{U} at fixed r0 with simultaneous
/// Dvoretzky-Kiefer-Wolfowitz bands of confidence 1 - band_alpha.
std::vector<CdfPoint> estimate_cdf_ure(const McConfig& cfg, double r0, const Scenario& scenario,
                                       const std::vector<double>& u_points,
                                       double band_alpha = 1e-3);

/// Empirical E[cos(w Re{U})] at fixed r0 with its standard error; the noise
/// term is included only when include_noise is set.
std::vector<McEstimate> empirical_cf(const McConfig& cfg, double r0, const Scenario& scenario,
                                     const std::vector<double>& w_points, bool include_noise);

}  // namespace mmw
