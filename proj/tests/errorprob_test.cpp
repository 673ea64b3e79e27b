#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mmw/error.hpp"
#include "mmw/errorprob.hpp"
#include "mmw/mc_oracle.hpp"
#include "mmw/specfun.hpp"
#include "noise_only_oracle.hpp"

using namespace mmw;

namespace {

Scenario fig1(double lambda, double snr_db, double main_db = 10) {
  NetworkParams p;
  p.lambda_bs = lambda;
  return Scenario::mmwave(p, AntennaPattern::from_db(main_db, -10, 15), db_to_linear(snr_db),
                          1e-6, Modulation::psk(2));
}

}  // namespace

TEST_CASE("zero distance gives one half") {
  const Scenario s = fig1(1e-4, 10);
  CHECK(pep_conditional(1.0, 40.0, 0.0, s) == 0.5);
  CHECK(pep_conditional(0.0, 40.0, 2.0, s) == 0.5);
  CHECK(pep_rayleigh(40.0, 0.0, s) == 0.5);
  CHECK(apep(0.0, s) == 0.5);
}

TEST_CASE("noise-only conditional PEP equals the Gaussian Q form") {
  NetworkParams quiet;
  quiet.lambda_bs = 0.0;
  int points = 0;
  for (double snr_db : {0.0, 10.0})
    for (double r0 : {150.0, 250.0, 400.0, 600.0})
      for (double h0 : {0.5, 1.0, 2.0}) {
        const Scenario s = Scenario::mmwave(quiet, AntennaPattern::from_db(10, -10, 15),
                                            db_to_linear(snr_db), 1e-6, Modulation::psk(2));
        CAPTURE(snr_db);
        CAPTURE(r0);
        CAPTURE(h0);
        CHECK(std::abs(pep_conditional(h0, r0, 2.0, s) - pep_noise_only(h0, r0, 2.0, s)) < 1e-6);
        ++points;
      }
  CHECK(points >= 20);
}

TEST_CASE("no noise and no interference never errs") {
  NetworkParams quiet;
  quiet.lambda_bs = 0.0;
  Scenario s = Scenario::mmwave(quiet, AntennaPattern::from_db(10, -10, 15), 10.0, 0.0,
                                Modulation::psk(2));
  CHECK(pep_conditional(1.0, 40.0, 2.0, s) == 0.0);
}

TEST_CASE("noise-only APEP against 2-D quadrature of the Q form") {
  for (double lambda : {1e-5, 1e-4})
    for (double n0 : {1e-6, 1.0})
      for (double snr_db : {0.0, 20.0}) {
        NetworkParams p;
        p.lambda_bs = lambda;
        Scenario s = Scenario::mmwave(p, AntennaPattern::from_db(10, -10, 15),
                                      db_to_linear(snr_db), n0, Modulation::psk(2));
        s.interference = false;
        const double want = test_support::noise_only_apep_2d(s, 2.0);
        CAPTURE(lambda);
        CAPTURE(n0);
        CAPTURE(snr_db);
        CHECK(std::abs(apep(2.0, s) - want) <= 1e-5 * want);
      }
}

TEST_CASE("conditional PEP stays in [0, 1/2]") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const Scenario s = fig1(std::pow(10.0, -5 + u(gen)), 30 * u(gen));
    const double p = pep_conditional(0.1 + 2 * u(gen), 5 + 300 * u(gen), 2.0 * u(gen) + 0.01, s);
    CHECK(p >= 0.0);
    CHECK(p < 0.5);
  }
}

TEST_CASE("conditional PEP against Monte Carlo at the reference point") {
  const Scenario s = fig1(1e-4, 10);
  McConfig mc;
  mc.trials = 200000;
  mc.seed = 7;
  const McEstimate e = estimate_pep(mc, 1.0, 40.0, 2.0, s);
  const double p = pep_conditional(1.0, 40.0, 2.0, s);
  CAPTURE(p);
  CAPTURE(e.mean);
  CHECK(std::abs(p - e.mean) <= 3 * e.std_error);
}

TEST_CASE("Gil-Pelaez PEP against Monte Carlo on random parameter sets") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int set = 0; set < 5; ++set) {
    NetworkParams p;
    p.lambda_bs = std::pow(10.0, -5 + u(gen));
    p.alpha_los = 2.0 + 0.4 * u(gen);
    const Scenario s = Scenario::mmwave(p, AntennaPattern::from_db(10 + 10 * u(gen), -10, 15),
                                        std::pow(10.0, u(gen)), 1e-6, Modulation::psk(2));
    // Far serving BS and weak fading so the error rate is well above 1e-4.
    const double r0 = 60 + 60 * u(gen);
    const double h0 = 0.2 + 0.6 * u(gen);
    McConfig mc;
    mc.trials = 100000;
    mc.seed = 500 + set;
    const McEstimate e = estimate_pep(mc, h0, r0, 2.0, s);
    const double analytic = pep_conditional(h0, r0, 2.0, s);
    CAPTURE(set);
    CAPTURE(analytic);
    CAPTURE(e.mean);
    CHECK(std::abs(analytic - e.mean) <= 3 * e.std_error);
  }
}

TEST_CASE("APEP is nonincreasing in SNR and in density") {
  double prev = 1.0;
  for (int i = 0; i < 10; ++i) {
    const double v = apep(2.0, fig1(1e-4, 3.0 * i));
    CHECK(v <= prev);
    prev = v;
  }
  for (double snr_db : {0.0, 10.0, 20.0}) {
    double last = 1.0;
    for (double lambda : {1e-6, 1e-5, 3e-5, 1e-4, 3e-4}) {
      const double v = apep(2.0, fig1(lambda, snr_db));
      CAPTURE(snr_db);
      CAPTURE(lambda);
      CHECK(v <= last);
      last = v;
    }
  }
}

TEST_CASE("omnidirectional baseline equals a hand-specialized single-class pipeline") {
  NetworkParams p;
  p.lambda_bs = 1e-4;
  const Scenario s = Scenario::omnidirectional(p, 10.0, 1e-6, Modulation::psk(2));
  ErrorProbConfig tight;
  tight.inner.rel_tol = 1e-13;
  tight.inner.abs_tol = 1e-300;
  tight.outer.rel_tol = 1e-12;
  tight.outer.abs_tol = 1e-300;

  // One PPP of density lambda with exponent alpha_L on [xi, inf), unit gains:
  // log Phi_I = -pi lambda xi^2 K(c xi^{-2 alpha}) with K from the regularized
  // incomplete gamma function.
  const double a = p.alpha_los;
  const double sv = 1.0 / a;
  const double e0 = s.budget.symbol_energy;
  const double n0 = s.budget.noise_level;
  const auto kernel = [&](double y) {
    return std::expm1(-y) + std::pow(y, sv) * std::tgamma(1 - sv) * gamma_p(1 - sv, y);
  };
  const auto conditional = [&](double xi) {
    const double c = std::sqrt(e0) * 2.0 / (4 * std::pow(xi, a));
    const auto g = [&](double t) {
      const double w = t / c;
      const double y = e0 * w * w / 4 * std::pow(xi, -2 * a);
      const double log_cf = -kPi * p.lambda_bs * xi * xi * kernel(y) - w * w * n0 / 4;
      return std::exp(-t * t) * -std::expm1(log_cf);
    };
    return integrate_finite(g, 0.0, 7.0, tight.inner) / std::sqrt(kPi);
  };
  const double xi_max = serving_distance_cutoff(p.lambda_bs, 1e-10);
  const double hand = integrate_finite(
      [&](double xi) { return serving_distance_pdf(xi, p.lambda_bs) * conditional(xi); }, 0.0,
      xi_max, tight.outer);
  const double pipeline = apep(2.0, s, tight);
  CAPTURE(hand);
  CAPTURE(pipeline);
  CHECK(std::abs(pipeline - hand) <= 1e-9 * hand);
}

TEST_CASE("nearest-neighbour ASEP") {
  NetworkParams p;
  Scenario s = Scenario::mmwave(p, AntennaPattern::from_db(20, -10, 15), 10.0, 1e-6,
                                Modulation::psk(2));
  const AsepResult bpsk = asep(s);
  CHECK(bpsk.value == apep(2.0, s));
  CHECK_FALSE(bpsk.clamped);
  s.modulation = Modulation::psk(4);
  const AsepResult qpsk = asep(s);
  CHECK(qpsk.value == doctest::Approx(2 * apep(std::sqrt(2.0), s)).epsilon(1e-12));
  s.modulation = Modulation::psk(8);
  const AsepResult psk8 = asep(s);
  CHECK(bpsk.value < qpsk.value);
  CHECK(qpsk.value < psk8.value);
}

TEST_CASE("misalignment gain distribution") {
  const AntennaPattern pat = AntennaPattern::from_db(10, -10, 15);
  const auto aligned = misalignment_gain_pdf(BeamErrorModel{0.0}, pat);
  CHECK(aligned[GainClass::MM].probability == 1.0);
  CHECK(aligned[GainClass::mm].probability == 0.0);
  const auto lost = misalignment_gain_pdf(BeamErrorModel{1e12}, pat);
  CHECK(lost[GainClass::mm].probability == doctest::Approx(1.0).epsilon(1e-9));
  const auto five = misalignment_gain_pdf(BeamErrorModel::from_degrees(5), pat);
  const double f = mmw::erf(15.0 / (2 * std::sqrt(2.0) * 5.0));
  // Reference weights are quoted to four decimals.
  CHECK(std::abs(f - 0.8664) < 5e-5);
  CHECK(std::abs(five[GainClass::MM].probability - 0.7507) < 1e-4);
  CHECK(std::abs(five[GainClass::Mm].probability - 0.2315) < 1e-4);
  CHECK(std::abs(five[GainClass::mm].probability - 0.0178) < 1e-4);
  CHECK(five[GainClass::MM].gain == pat.main_gain * pat.main_gain);
}

TEST_CASE("beam-error mixture") {
  const Scenario s = fig1(1e-5, 10, 20);
  CHECK(apep_with_beam_error(2.0, s, BeamErrorModel{0.0}) == apep(2.0, s));
  const auto detail = apep_with_beam_error_detail(2.0, s, BeamErrorModel::from_degrees(5));
  double lo = 1, hi = 0, mix = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    lo = std::min(lo, detail.branch[i]);
    hi = std::max(hi, detail.branch[i]);
    mix += detail.weight[i] * detail.branch[i];
  }
  CHECK(detail.value == mix);
  CHECK(detail.value >= lo);
  CHECK(detail.value <= hi);
  double prev = 0;
  for (double sigma : {0.0, 2.0, 5.0, 8.0}) {
    const double v = apep_with_beam_error(2.0, s, BeamErrorModel::from_degrees(sigma));
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("parameter errors") {
  const Scenario s = fig1(1e-4, 10);
  CHECK_THROWS_AS(pep_conditional(-1.0, 40.0, 2.0, s), ParameterError);
  CHECK_THROWS_AS(pep_conditional(1.0, 0.0, 2.0, s), ParameterError);
  CHECK_THROWS_AS(apep(-1.0, s), ParameterError);
  NetworkParams quiet;
  quiet.lambda_bs = 0;
  Scenario q = s;
  q.network = quiet;
  CHECK_THROWS_AS(apep(2.0, q), ParameterError);
  CHECK_THROWS_AS(BeamErrorModel{-1.0}.validate(), ParameterError);
}
