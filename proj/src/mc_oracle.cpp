#include "mmw/mc_oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "mmw/error.hpp"
#include "mmw/kernels.hpp"

namespace mmw {
namespace {

// Constants shared by every trial of one estimate.
struct TrialSetup {
  const Scenario* scenario = nullptr;
  GainDistribution gains;
  double cum_mm = 0;
  double cum_mm_mix = 0;
  double amplitude[3] = {};
  bool all_los = false;
  const kernels::KernelTable* kernels = nullptr;

  TrialSetup(const Scenario& s) : scenario(&s), gains(s.interferer_gains()) {
    all_los = s.geometry() == InterferenceGeometry::all_los;
    cum_mm = gains.entries[0].probability;
    cum_mm_mix = cum_mm + gains.entries[1].probability;
    for (std::size_t i = 0; i < 3; ++i)
      amplitude[i] = std::sqrt(gains.entries[i].gain * s.budget.symbol_energy *
                               s.budget.fading_power);
    kernels = &kernels::active_kernels();
  }
};

struct Scratch {
  std::vector<double> u[5];
  void resize(std::size_t n) {
    for (auto& v : u) v.resize(n);
  }
};

double draw_serving_distance(Xoshiro256ss& rng, double lambda_bs) {
  // Inverse of P(r0 > xi) = exp(-pi lambda xi^2).
  return std::sqrt(-std::log(rng.uniform()) / (kPi * lambda_bs));
}

std::uint64_t draw_count(Xoshiro256ss& rng, double mean) {
  if (!(mean > 0)) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return static_cast<std::uint64_t>(dist(rng));
}

double interferer_mean_count(double lambda_bs, double r0, double window) {
  return lambda_bs * kPi * (window * window - r0 * r0);
}

// Draws the interferers of one trial into scratch (five uniforms each, in
// interferer order) and returns their count.
std::size_t draw_interferers(Xoshiro256ss& rng, const Scenario& s, double r0, double window,
                             Scratch& scratch) {
  const double lambda = s.interference ? s.network.lambda_bs : 0.0;
  const std::uint64_t n = draw_count(rng, interferer_mean_count(lambda, r0, window));
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto& v : scratch.u) v[i] = rng.uniform();
  return n;
}

kernels::InterfererParams interferer_params(const TrialSetup& setup, double r0, double window) {
  const Scenario& s = *setup.scenario;
  kernels::InterfererParams p;
  p.r0_sq = r0 * r0;
  p.span_sq = window * window - r0 * r0;
  p.ball_sq = setup.all_los ? std::numeric_limits<double>::infinity()
                            : s.network.ball_radius * s.network.ball_radius;
  p.half_alpha_los = 0.5 * s.network.alpha_los;
  p.half_alpha_nlos = 0.5 * s.network.alpha_nlos;
  p.cum_mm = setup.cum_mm;
  p.cum_mm_mix = setup.cum_mm_mix;
  for (std::size_t i = 0; i < 3; ++i) p.amplitude[i] = setup.amplitude[i];
  return p;
}

struct TrialSample {
  double r0 = 0;
  double interference = 0;  // Re{I}, including the Gaussian tail term
  double noise = 0;         // Re{n}
  double h0 = 0;
};

// Draw order per trial: r0 (if random), interferer count and uniforms, one
// normal pair (tail, noise), then |h0| (if random).
TrialSample simulate_trial(std::uint64_t seed, std::uint64_t index, const TrialSetup& setup,
                           const McConfig& cfg, std::optional<double> r0,
                           std::optional<double> h0, Scratch& scratch) {
  const Scenario& s = *setup.scenario;
  Xoshiro256ss rng(seed, index);
  TrialSample t;
  t.r0 = r0 ? *r0 : draw_serving_distance(rng, s.network.lambda_bs);
  const double window = window_radius_for(t.r0, s, cfg);
  const std::size_t n = draw_interferers(rng, s, t.r0, window, scratch);
  if (n > 0) {
    const kernels::InterfererDraws d{scratch.u[0].data(), scratch.u[1].data(),
                                     scratch.u[2].data(), scratch.u[3].data(),
                                     scratch.u[4].data()};
    t.interference = setup.kernels->interference_sum(interferer_params(setup, t.r0, window), d, n);
  }
  const auto [z_tail, z_noise] = rng.normal_pair();
  if (cfg.tail_compensation && s.interference)
    t.interference += std::sqrt(truncated_tail_variance(window, s)) * z_tail;
  t.noise = std::sqrt(0.5 * s.budget.noise_level) * z_noise;
  t.h0 = h0 ? *h0 : std::sqrt(-s.budget.fading_power * std::log(rng.uniform()));
  return t;
}

// Runs fn(first_trial, trial_count) for every batch on cfg.jobs
// workers and returns the per-batch results in batch order.
template <typename Result, typename Fn>
std::vector<Result> run_batches(const McConfig& cfg, Fn fn) {
  const std::uint64_t batches = (cfg.trials + cfg.batch - 1) / cfg.batch;
  std::vector<Result> results(batches);
  unsigned jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
  jobs = static_cast<unsigned>(std::min<std::uint64_t>(jobs, batches));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t b = next++; b < batches; b = next++) {
        const std::uint64_t first = b * cfg.batch;
        const std::uint64_t count = std::min(cfg.batch, cfg.trials - first);
        results[b] = fn(first, count);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = batches;
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

McEstimate binomial_estimate(std::uint64_t hits, std::uint64_t trials) {
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

void check_scenario(const Scenario& s) {
  s.validate();
}

}  // namespace

void McConfig::validate() const {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (batch < 1) throw ParameterError("batch must be at least 1");
  if (!(window_radius >= 0)) throw ParameterError("window_radius must be nonnegative");
  if (!(truncation_tolerance > 0 && truncation_tolerance < 1) ||
      !(omni_truncation_tolerance > 0 && omni_truncation_tolerance < 1))
    throw ParameterError("truncation tolerances must lie in (0, 1)");
}

double Interferer::real_part(double symbol_energy) const {
  return std::sqrt(gain * symbol_energy) * std::pow(radius, -alpha) * magnitude *
         std::cos(fading_phase + symbol_phase);
}

double window_radius_for(double r0, const Scenario& scenario, const McConfig& cfg) {
  const bool all_los = scenario.geometry() == InterferenceGeometry::all_los;
  const double alpha = all_los ? scenario.network.alpha_los : scenario.network.alpha_nlos;
  const double tol = all_los ? cfg.omni_truncation_tolerance : cfg.truncation_tolerance;
  const double inner = all_los ? r0 : std::max(r0, scenario.network.ball_radius);
  // (W / inner)^{2 - 2 alpha} = tol / 2 leaves a factor-2 margin.
  const double automatic = inner * std::pow(0.5 * tol, -1.0 / (2.0 * alpha - 2.0));
  return std::max({cfg.window_radius, automatic, r0});
}

double truncated_power_ratio(double window, double r0, const Scenario& scenario) {
  const bool all_los = scenario.geometry() == InterferenceGeometry::all_los;
  const double alpha = all_los ? scenario.network.alpha_los : scenario.network.alpha_nlos;
  const double inner = all_los ? r0 : std::max(r0, scenario.network.ball_radius);
  if (window <= inner) return 1.0;
  return std::pow(window / inner, 2.0 - 2.0 * alpha);
}

double truncated_tail_variance(double window, const Scenario& scenario) {
  const bool all_los = scenario.geometry() == InterferenceGeometry::all_los;
  const double alpha = all_los || window <= scenario.network.ball_radius
                           ? scenario.network.alpha_los
                           : scenario.network.alpha_nlos;
  const LinkBudget& b = scenario.budget;
  // sum_G lambda p_G 2 pi int_W^inf (G E0 sigma0 / 2) r^{1 - 2 alpha} dr
  return scenario.network.lambda_bs * scenario.interferer_gains().mean_gain() * b.symbol_energy *
         b.fading_power * kPi * std::pow(window, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
}

Snapshot sample_realization(Xoshiro256ss& rng, const Scenario& scenario,
                            std::optional<double> r0, const McConfig& cfg) {
  check_scenario(scenario);
  const TrialSetup setup(scenario);
  Snapshot snap;
  snap.serving_distance = r0 ? *r0 : draw_serving_distance(rng, scenario.network.lambda_bs);
  snap.window_radius = window_radius_for(snap.serving_distance, scenario, cfg);
  Scratch scratch;
  const std::size_t n =
      draw_interferers(rng, scenario, snap.serving_distance, snap.window_radius, scratch);
  const double r0_sq = snap.serving_distance * snap.serving_distance;
  const double span = snap.window_radius * snap.window_radius - r0_sq;
  snap.interferers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Interferer it;
    it.radius = std::sqrt(r0_sq + scratch.u[0][i] * span);
    const double uc = scratch.u[1][i];
    it.gain_class = uc < setup.cum_mm       ? GainClass::MM
                    : uc < setup.cum_mm_mix ? GainClass::Mm
                                            : GainClass::mm;
    it.gain = setup.gains[it.gain_class].gain;
    it.alpha = setup.all_los ? scenario.network.alpha_los
                             : path_loss_exponent(it.radius, scenario.network);
    it.magnitude = std::sqrt(-scenario.budget.fading_power * std::log(scratch.u[2][i]));
    it.fading_phase = kTwoPi * scratch.u[3][i];
    it.symbol_phase = kTwoPi * scratch.u[4][i];
    snap.interferers.push_back(it);
  }
  return snap;
}

namespace {

// Shared trial loop; serving_gains == nullptr keeps the scenario's G0.
McEstimate count_pairwise_errors(const McConfig& cfg, std::optional<double> h0_mag,
                                 std::optional<double> r0, double delta, const Scenario& scenario,
                                 const GainDistribution* serving_gains) {
  cfg.validate();
  check_scenario(scenario);
  if (!(delta >= 0)) throw ParameterError("delta must be nonnegative");
  if (r0 && !(*r0 > 0)) throw ParameterError("r0 must be positive");
  if (h0_mag && !(*h0_mag >= 0)) throw ParameterError("h0_mag must be nonnegative");
  if (!r0 && !(scenario.network.lambda_bs > 0))
    throw ParameterError("a random serving distance needs lambda_bs > 0");
  const TrialSetup setup(scenario);
  std::array<Scenario, 3> branches{scenario, scenario, scenario};
  double cum[2] = {2.0, 2.0};
  if (serving_gains) {
    for (std::size_t k = 0; k < 3; ++k)
      branches[k].budget.serving_gain = serving_gains->entries[k].gain;
    cum[0] = serving_gains->entries[0].probability;
    cum[1] = cum[0] + serving_gains->entries[1].probability;
  }
  const auto counts = run_batches<std::uint64_t>(cfg, [&](std::uint64_t first, std::uint64_t count) {
    Scratch scratch;
    std::uint64_t errors = 0;
    for (std::uint64_t i = first; i < first + count; ++i) {
      const TrialSample t = simulate_trial(cfg.seed, i, setup, cfg, r0, h0_mag, scratch);
      const Scenario* serving = &scenario;
      if (serving_gains) {
        // Extra stream so the interference draws match the aligned case.
        Xoshiro256ss beam(cfg.seed ^ 0xA5A5A5A5A5A5A5A5ULL, i);
        const double u = beam.uniform();
        serving = &branches[u < cum[0] ? 0 : u < cum[1] ? 1 : 2];
      }
      const double threshold = decision_threshold(t.h0, t.r0, delta, *serving);
      if (t.interference + t.noise < -threshold) ++errors;
    }
    return errors;
  });
  std::uint64_t hits = 0;
  for (auto c : counts) hits += c;
  return binomial_estimate(hits, cfg.trials);
}

}  // namespace

McEstimate estimate_pep(const McConfig& cfg, std::optional<double> h0_mag,
                        std::optional<double> r0, double delta, const Scenario& scenario) {
  return count_pairwise_errors(cfg, h0_mag, r0, delta, scenario, nullptr);
}

McEstimate estimate_pep_with_beam_error(const McConfig& cfg, double delta,
                                        const Scenario& scenario, const BeamErrorModel& model) {
  const GainDistribution serving = misalignment_gain_pdf(model, scenario.pattern);
  return count_pairwise_errors(cfg, std::nullopt, std::nullopt, delta, scenario, &serving);
}

McEstimate estimate_asep(const McConfig& cfg, const Scenario& scenario,
                         const BeamErrorModel& model) {
  const Modulation& m = scenario.modulation;
  m.validate();
  McEstimate e = model.sigma_be > 0
                     ? estimate_pep_with_beam_error(cfg, m.min_distance, scenario, model)
                     : estimate_pep(cfg, std::nullopt, std::nullopt, m.min_distance, scenario);
  e.mean *= m.neighbor_count;
  e.std_error *= m.neighbor_count;
  return e;
}

std::vector<CdfPoint> estimate_cdf_ure(const McConfig& cfg, double r0, const Scenario& scenario,
                                       const std::vector<double>& u_points, double band_alpha) {
  cfg.validate();
  check_scenario(scenario);
  if (!(band_alpha > 0 && band_alpha < 1)) throw ParameterError("band_alpha must lie in (0, 1)");
  const TrialSetup setup(scenario);
  const auto batches =
      run_batches<std::vector<std::uint64_t>>(cfg, [&](std::uint64_t first, std::uint64_t count) {
        Scratch scratch;
        std::vector<std::uint64_t> below(u_points.size(), 0);
        for (std::uint64_t i = first; i < first + count; ++i) {
          const TrialSample t = simulate_trial(cfg.seed, i, setup, cfg, r0, 1.0, scratch);
          const double u = t.interference + t.noise;
          for (std::size_t j = 0; j < u_points.size(); ++j)
            if (u <= u_points[j]) ++below[j];
        }
        return below;
      });
  const double n = static_cast<double>(cfg.trials);
  const double eps = std::sqrt(std::log(2.0 / band_alpha) / (2.0 * n));
  std::vector<CdfPoint> out;
  for (std::size_t j = 0; j < u_points.size(); ++j) {
    std::uint64_t total = 0;
    for (const auto& b : batches) total += b[j];
    const double f = static_cast<double>(total) / n;
    out.push_back({u_points[j], f, std::max(0.0, f - eps), std::min(1.0, f + eps)});
  }
  return out;
}

std::vector<McEstimate> empirical_cf(const McConfig& cfg, double r0, const Scenario& scenario,
                                     const std::vector<double>& w_points, bool include_noise) {
  cfg.validate();
  check_scenario(scenario);
  const TrialSetup setup(scenario);
  // Per batch and w: sum cos(w v) and sum cos(2 w v); cos^2 = (1 + cos 2x) / 2.
  const auto batches =
      run_batches<std::vector<double>>(cfg, [&](std::uint64_t first, std::uint64_t count) {
        Scratch scratch;
        std::vector<double> samples(count);
        for (std::uint64_t i = 0; i < count; ++i) {
          const TrialSample t = simulate_trial(cfg.seed, first + i, setup, cfg, r0, 1.0, scratch);
          samples[i] = include_noise ? t.interference + t.noise : t.interference;
        }
        std::vector<double> sums;
        for (double w : w_points) {
          sums.push_back(setup.kernels->cosine_sum(w, samples.data(), count));
          sums.push_back(setup.kernels->cosine_sum(2.0 * w, samples.data(), count));
        }
        return sums;
      });
  const double n = static_cast<double>(cfg.trials);
  std::vector<McEstimate> out;
  for (std::size_t j = 0; j < w_points.size(); ++j) {
    double s1 = 0, s2 = 0;
    for (const auto& b : batches) {
      s1 += b[2 * j];
      s2 += b[2 * j + 1];
    }
    const double mean = s1 / n;
    const double second = 0.5 * (1.0 + s2 / n);
    const double var = std::max(0.0, second - mean * mean) * n / std::max(1.0, n - 1.0);
    out.push_back({mean, std::sqrt(var / n), cfg.trials});
  }
  return out;
}

}  // namespace mmw
