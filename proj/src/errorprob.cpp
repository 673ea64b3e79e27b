#include "mmw/errorprob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mmw/error.hpp"
#include "mmw/specfun.hpp"

namespace mmw {
namespace {

constexpr double kInvSqrtPi = 0.564189583547756286948079451560772586;
// Beyond t = 7 the Gaussian weight e^{-t^2} is below 5e-22.
constexpr double kGaussianCutoff = 7.0;

bool noise_free_and_quiet(const CfContext& ctx) {
  return ctx.budget.noise_level == 0.0 && ctx.params.lambda_bs == 0.0;
}

// Frequency at which log Phi_U first drops below -1, within a factor of 2.
// log Phi_U is even and nonincreasing in |w|.
double decay_scale(const CfContext& ctx) {
  double w = 1.0;
  const bool above = log_cf_total(w, ctx) > -1.0;
  for (int i = 0; i < 400; ++i) {
    const double next = above ? 2.0 * w : 0.5 * w;
    const bool next_above = log_cf_total(next, ctx) > -1.0;
    if (next_above != above) return above ? next : w;
    w = next;
  }
  throw NumericFailure("characteristic function shows no decay scale", w, 0, 400);
}

void check_delta(double delta) {
  if (!(delta >= 0) || !std::isfinite(delta))
    throw ParameterError("delta must be finite and nonnegative, got " + std::to_string(delta));
}

}  // namespace

Scenario Scenario::mmwave(const NetworkParams& network, const AntennaPattern& pattern, double snr,
                          double noise_level, const Modulation& modulation) {
  pattern.validate();
  const double g0 = pattern.main_gain * pattern.main_gain;
  Scenario s{network, pattern, LinkBudget::from_snr(snr, noise_level, 1.0, g0), modulation,
             NetworkMode::mmwave, true};
  s.validate();
  return s;
}

Scenario Scenario::omnidirectional(const NetworkParams& network, double snr, double noise_level,
                                   const Modulation& modulation) {
  Scenario s{network, AntennaPattern::omni(), LinkBudget::from_snr(snr, noise_level, 1.0, 1.0),
             modulation, NetworkMode::omni, true};
  s.validate();
  return s;
}

GainDistribution Scenario::interferer_gains() const {
  if (mode == NetworkMode::omni) return gain_distribution(AntennaPattern::omni());
  return gain_distribution(pattern);
}

InterferenceGeometry Scenario::geometry() const {
  return mode == NetworkMode::omni ? InterferenceGeometry::all_los
                                   : InterferenceGeometry::los_ball;
}

CfContext Scenario::context(double serving_distance) const {
  CfContext ctx{network, mode == NetworkMode::omni ? AntennaPattern::omni() : pattern,
                interferer_gains(), budget, serving_distance, geometry()};
  if (!interference) ctx.params.lambda_bs = 0.0;
  ctx.validate();
  return ctx;
}

void Scenario::validate() const {
  network.validate();
  pattern.validate();
  budget.validate();
  modulation.validate();
}

BeamErrorModel BeamErrorModel::from_degrees(double sigma_deg) {
  BeamErrorModel m{degrees_to_radians(sigma_deg)};
  m.validate();
  return m;
}

double BeamErrorModel::alignment_probability(double beamwidth) const {
  validate();
  if (sigma_be == 0.0) return 1.0;
  if (std::isinf(sigma_be)) return 0.0;
  return mmw::erf(beamwidth / (2.0 * std::sqrt(2.0) * sigma_be));
}

void BeamErrorModel::validate() const {
  if (!(sigma_be >= 0))
    throw ParameterError("sigma_be must be nonnegative, got " + std::to_string(sigma_be));
}

double decision_threshold(double h0_mag, double r0, double delta, const Scenario& scenario) {
  return std::sqrt(scenario.budget.serving_gain * scenario.budget.symbol_energy) * delta * h0_mag /
         (2.0 * std::pow(r0, scenario.network.alpha_los));
}

double pep_noise_only(double h0_mag, double r0, double delta, const Scenario& scenario) {
  const double a = decision_threshold(h0_mag, r0, delta, scenario);
  if (a == 0.0) return 0.5;
  if (scenario.budget.noise_level == 0.0) return 0.0;
  // Re{n} ~ N(0, N0 / 2): Q(a / sqrt(N0 / 2)) = erfc(a / sqrt(N0)) / 2.
  return 0.5 * std::erfc(a / std::sqrt(scenario.budget.noise_level));
}

double pep_conditional(double h0_mag, double r0, double delta, const Scenario& scenario,
                       const ErrorProbConfig& cfg) {
  scenario.validate();
  check_delta(delta);
  if (!(h0_mag >= 0) || !std::isfinite(h0_mag))
    throw ParameterError("h0_mag must be finite and nonnegative");
  if (!(r0 > 0) || !std::isfinite(r0)) throw ParameterError("r0 must be positive");
  const double a = decision_threshold(h0_mag, r0, delta, scenario);
  if (a == 0.0) return 0.5;
  const CfContext ctx = scenario.context(r0);
  // U is identically zero: the decision is always correct.
  if (noise_free_and_quiet(ctx)) return 0.0;

  const auto f = [&](double w) {
    return std::sin(a * w) / w * std::exp(log_cf_total(w, ctx));
  };
  // Half a period of the sine, but no wider than the CF decay scale so the
  // first panel cannot hide a narrow peak at the origin.
  const PanelSchedule panels{std::min(kPi / a, decay_scale(ctx)), 1.0, 200000};
  const double integral = integrate_semi_infinite(f, 0.0, cfg.inner, panels);
  const double p = 0.5 - integral / kPi;
  const double slack = 1e3 * (cfg.inner.abs_tol + 0.5 * cfg.inner.rel_tol);
  if (p < -slack || p > 0.5 + slack)
    throw NumericFailure("Gil-Pelaez PEP outside [0, 1/2] beyond tolerance", p, slack, 0);
  return std::clamp(p, 0.0, 0.5);
}

double pep_rayleigh(double r0, double delta, const Scenario& scenario, const ErrorProbConfig& cfg) {
  check_delta(delta);
  if (!(r0 >= 0) || !std::isfinite(r0)) throw ParameterError("r0 must be finite and >= 0");
  if (delta == 0.0) return 0.5;
  if (r0 == 0.0) return 0.0;  // infinite received power
  const CfContext ctx = scenario.context(r0);
  if (noise_free_and_quiet(ctx)) return 0.0;
  const LinkBudget& b = scenario.budget;
  // Averaging sin(a |h0| w) over Rayleigh |h0| turns the Gil-Pelaez integrand
  // into sqrt(pi) c w e^{-c^2 w^2} Phi_U(w) / w; with t = c w and
  // int sqrt(pi) e^{-t^2} dt = pi / 2 the PEP becomes the cancellation-free
  //   (1 / sqrt(pi)) int_0^inf e^{-t^2} (1 - Phi_U(t / c)) dt.
  const double c = std::sqrt(b.serving_gain * b.symbol_energy * b.fading_power) * delta /
                   (4.0 * std::pow(r0, scenario.network.alpha_los));
  const auto f = [&](double t) {
    return std::exp(-t * t) * -std::expm1(log_cf_total(t / c, ctx));
  };
  // 1 - Phi_U(t / c) rises from 0 to 1 around t = c * decay_scale; place
  // breakpoints geometrically from there so that transition is resolved.
  std::vector<double> cuts{0.0};
  for (double t = c * decay_scale(ctx) / 64.0; t < kGaussianCutoff; t *= 4.0)
    if (t > 0) cuts.push_back(t);
  cuts.push_back(kGaussianCutoff);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    sum += integrate_finite(f, cuts[i], cuts[i + 1], cfg.inner);
  return std::clamp(kInvSqrtPi * sum, 0.0, 0.5);
}

double serving_distance_cutoff(double lambda_bs, double tail_mass) {
  if (!(lambda_bs > 0)) throw ParameterError("serving distance needs lambda_bs > 0");
  if (!(tail_mass > 0 && tail_mass < 1)) throw ParameterError("tail mass must lie in (0, 1)");
  return std::sqrt(-std::log(tail_mass) / (kPi * lambda_bs));
}

double apep(double delta, const Scenario& scenario, const ErrorProbConfig& cfg) {
  scenario.validate();
  check_delta(delta);
  if (delta == 0.0) return 0.5;
  const double lambda = scenario.network.lambda_bs;
  const double xi_max = serving_distance_cutoff(lambda, cfg.serving_tail_mass);
  const auto f = [&](double xi) {
    return serving_distance_pdf(xi, lambda) * pep_rayleigh(xi, delta, scenario, cfg);
  };
  // The LOS annulus vanishes at R_B, so the conditional PEP has a kink there.
  const double rb = scenario.network.ball_radius;
  double total = 0.0;
  if (scenario.geometry() == InterferenceGeometry::los_ball && rb < xi_max) {
    total = integrate_finite(f, 0.0, rb, cfg.outer) + integrate_finite(f, rb, xi_max, cfg.outer);
  } else {
    total = integrate_finite(f, 0.0, xi_max, cfg.outer);
  }
  return std::clamp(total, 0.0, 0.5);
}

AsepResult asep(const Scenario& scenario, const ErrorProbConfig& cfg) {
  const Modulation& m = scenario.modulation;
  m.validate();
  AsepResult r;
  r.unclamped = m.neighbor_count * apep(m.min_distance, scenario, cfg);
  r.clamped = r.unclamped > 1.0;
  r.value = std::min(r.unclamped, 1.0);
  return r;
}

GainDistribution misalignment_gain_pdf(const BeamErrorModel& model,
                                       const AntennaPattern& pattern) {
  pattern.validate();
  return GainDistribution::from_alignment(pattern, model.alignment_probability(pattern.beamwidth));
}

BeamErrorBreakdown apep_with_beam_error_detail(double delta, const Scenario& scenario,
                                               const BeamErrorModel& model,
                                               const ErrorProbConfig& cfg) {
  const GainDistribution serving = misalignment_gain_pdf(model, scenario.pattern);
  BeamErrorBreakdown out;
  for (std::size_t i = 0; i < 3; ++i) {
    out.weight[i] = serving.entries[i].probability;
    if (out.weight[i] == 0.0) {
      out.branch[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    Scenario branch = scenario;
    branch.budget.serving_gain = serving.entries[i].gain;
    out.branch[i] = apep(delta, branch, cfg);
    out.value += out.weight[i] * out.branch[i];
  }
  return out;
}

double apep_with_beam_error(double delta, const Scenario& scenario, const BeamErrorModel& model,
                            const ErrorProbConfig& cfg) {
  return apep_with_beam_error_detail(delta, scenario, model, cfg).value;
}

}  // namespace mmw
