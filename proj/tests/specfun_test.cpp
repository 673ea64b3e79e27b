#include <cmath>
#include <random>

#include "doctest.h"
#include "mmw/error.hpp"
#include "mmw/quadrature.hpp"
#include "mmw/specfun.hpp"

// Reference values: tests/oracle/hypergeometric_reference.py (mpmath, 200 digits).

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Plain confluent series in long double; only used where it is well conditioned.
double confluent_series_oracle(double a, double b, double z) {
  long double term = 1, sum = 1;
  for (int k = 0; k < 500; ++k) {
    term *= (a + k) / ((b + k) * (k + 1.0L)) * z;
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("hypergeometric functions equal one at the origin") {
  CHECK(mmw::hyp1f2(-0.3, 0.5, 0.7, 0.0) == 1.0);
  CHECK(mmw::hyp2f2(-0.5, -1 / 2.1, 0.5, 1 - 1 / 2.1, 0.0) == 1.0);
  CHECK(mmw::hyp1f1(0.25, 1.5, 0.0) == 1.0);
}

TEST_CASE("1F2 matches high-precision series") {
  const double a = 2.1;
  CHECK(rel_err(mmw::hyp1f2(-1 / a, 0.5, 1 - 1 / a, -0.25), 1.4417833529821738402) < 1e-10);
  CHECK(rel_err(mmw::hyp1f2(-1 / a, 0.5, 1 - 1 / a, -100), 26.483368656705312572) < 1e-10);
  CHECK(rel_err(mmw::hyp1f2(-1 / a, 0.5, 1 - 1 / a, -1e4), 237.70271045260818126) < 1e-10);
  CHECK(rel_err(mmw::hyp1f2(-1 / a, 0.5, 1 - 1 / a, -2.25e6), 3134.1039687258270756) < 1e-9);
  CHECK(rel_err(mmw::hyp1f2(0.3, 1.7, 2.2, -5e5), 0.022891897001695307625) < 1e-7);
}

TEST_CASE("2F2 matches high-precision series across the use range") {
  CHECK(rel_err(mmw::hyp2f2(-0.5, -1 / 2.1, 0.5, 1 - 1 / 2.1, -1), 0.1374198929075216274) <
        1e-10);
  struct Row {
    double alpha, z, want;
  };
  const Row rows[] = {
      {2.1, -30, -14.493442784756509636},   {2.1, -75, -29.046685428792569892},
      {2.1, -1e3, -166.76648949538078311},  {2.1, -1e6, -9849.9418821174688889},
      {2.1, -1e10, -1489077.709128377662},  {4.0, -30, -3.9723281734480765379},
      {4.0, -75, -8.1375122062314317799},   {4.0, -1e3, -42.267863116486172878},
      {4.0, -1e6, -1694.9516936534593665},  {4.0, -1e10, -176470.36351803103612},
  };
  for (const auto& r : rows) {
    CAPTURE(r.alpha);
    CAPTURE(r.z);
    CHECK(rel_err(mmw::hyp2f2(-0.5, -1 / r.alpha, 0.5, 1 - 1 / r.alpha, r.z), r.want) < 1e-7);
  }
  CHECK(rel_err(mmw::hyp2f2(0.7, 1.3, 2.5, 0.4, -12), -0.14676797202569335363) < 1e-9);
  CHECK(rel_err(mmw::hyp2f2(0.7, 1.3, 2.5, 0.4, 7), 420.50163564424578049) < 1e-12);
}

TEST_CASE("2F2 with a cancelling pair reduces to 1F1") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> param(0.1, 3.0);
  std::uniform_real_distribution<double> arg(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double a = param(gen), c = param(gen), d = param(gen), z = arg(gen);
    const double want = confluent_series_oracle(c, d, z);
    CAPTURE(a);
    CAPTURE(c);
    CAPTURE(d);
    CAPTURE(z);
    CHECK(std::abs(mmw::hyp2f2(a, c, a, d, z) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("confluent kernel against reference values") {
  struct Row {
    double alpha, y, want;
  };
  const Row rows[] = {
      {2.1, 1e-8, 9.0909090752840909405e-9}, {2.1, 0.5, 0.41908750651438770672},
      {2.1, 3, 1.8636260270958122239},       {2.1, 40, 8.8118037077938233228},
      {2.1, 1e4, 135.02697676331946649},     {2.1, 1e10, 97895.666318221637744},
      {4.0, 1e-8, 3.3333333261904762056e-9}, {4.0, 0.5, 0.15054266912709064696},
      {4.0, 3, 0.61582955494142436282},      {4.0, 40, 2.081759853943083071},
      {4.0, 1e4, 11.254167024651776451},     {4.0, 1e10, 386.51078626028330409},
  };
  for (const auto& r : rows) {
    CAPTURE(r.alpha);
    CAPTURE(r.y);
    CHECK(rel_err(mmw::confluent_kernel_m1(1 / r.alpha, r.y), r.want) < 1e-12);
    CHECK(rel_err(mmw::hyp2f2(0.5, -1 / r.alpha, 0.5, 1 - 1 / r.alpha, -r.y) - 1.0, r.want) <
          (r.y < 1e-6 ? 1e-6 : 1e-12));
  }
}

TEST_CASE("confluent area term is continuous at r = 0") {
  const double s = 1 / 2.1, c = 3.7;
  const double at_zero = mmw::confluent_area_term(s, c, 0.0);
  CHECK(at_zero == doctest::Approx(std::tgamma(1 - s) * std::pow(c, s)).epsilon(1e-14));
  CHECK(mmw::confluent_area_term(s, c, 1e-9) == doctest::Approx(at_zero).epsilon(1e-12));
  CHECK(mmw::confluent_area_term(s, c, 1e-3) == doctest::Approx(at_zero).epsilon(1e-5));
}

TEST_CASE("integral identity for (1 - cos tx) / t^(2/alpha + 1)") {
  mmw::QuadratureConfig cfg;
  cfg.rel_tol = 1e-11;
  cfg.abs_tol = 1e-300;
  cfg.max_subdivisions = 20000;
  for (double alpha : {2.1, 4.0})
    for (double x : {0.1, 1.0, 3.0})
      for (double c : {1e-3, 1e-1, 1.0, 1e1, 1e3}) {
        const double nu = 2 / alpha;
        const double lhs = mmw::integrate_finite(
            [&](double t) {
              const double h = std::sin(0.5 * t * x);
              return 2 * h * h / std::pow(t, nu + 1);
            },
            0.0, c, cfg);
        const double rhs =
            0.5 * alpha * std::pow(c, -nu) * (mmw::hyp1f2(-1 / alpha, 0.5, 1 - 1 / alpha, -c * c * x * x / 4) - 1);
        CAPTURE(alpha);
        CAPTURE(x);
        CAPTURE(c);
        CHECK(rel_err(rhs, lhs) < 1e-6);
      }
}

TEST_CASE("erf") {
  CHECK(mmw::erf(0.0) == 0.0);
  CHECK(mmw::erf(40.0) == 1.0);
  CHECK(mmw::erf(-0.7) == -mmw::erf(0.7));
  CHECK(std::abs(mmw::erf(1.0607) - 0.86640018716087818521) < 1e-12);
}

TEST_CASE("gamma_p") {
  CHECK(mmw::gamma_p(1.0, 2.0) == doctest::Approx(1 - std::exp(-2.0)).epsilon(1e-14));
  CHECK(mmw::gamma_p(0.5, 2.0) == doctest::Approx(std::erf(std::sqrt(2.0))).epsilon(1e-13));
  CHECK(mmw::gamma_p(0.5, 0.3) == doctest::Approx(std::erf(std::sqrt(0.3))).epsilon(1e-13));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(mmw::hyp1f2(0.5, -2.0, 1.0, -1.0), mmw::ParameterError);
  CHECK_THROWS_AS(mmw::hyp2f2(0.5, 0.5, 0.0, 1.0, -1.0), mmw::ParameterError);
  CHECK_THROWS_AS(mmw::confluent_kernel_m1(1.5, 1.0), mmw::ParameterError);
}
