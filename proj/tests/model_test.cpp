#include <cmath>
#include <random>

#include "doctest.h"
#include "mmw/error.hpp"
#include "mmw/model.hpp"
#include "mmw/quadrature.hpp"

using namespace mmw;

TEST_CASE("full-width beam puts all mass on MM") {
  const auto d = gain_distribution(AntennaPattern{10.0, 0.1, kTwoPi});
  CHECK(d[GainClass::MM].probability == 1.0);
  CHECK(d[GainClass::Mm].probability == 0.0);
  CHECK(d[GainClass::mm].probability == 0.0);
}

TEST_CASE("unit gains at 15 degrees") {
  const auto d = gain_distribution(AntennaPattern{1.0, 1.0, kPi / 12});
  const double q = 1.0 / 24.0;
  for (const auto& e : d.entries) CHECK(e.gain == 1.0);
  CHECK(d[GainClass::MM].probability == doctest::Approx(q * q).epsilon(1e-15));
  CHECK(d[GainClass::Mm].probability == doctest::Approx(2 * q * (1 - q)).epsilon(1e-15));
  CHECK(d[GainClass::mm].probability == doctest::Approx((1 - q) * (1 - q)).epsilon(1e-15));
}

TEST_CASE("gain distribution of the default sectored pattern") {
  const auto d = gain_distribution(AntennaPattern::from_db(10, -10, 15));
  CHECK(d[GainClass::MM].gain == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(d[GainClass::Mm].gain == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d[GainClass::mm].gain == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(std::abs(d[GainClass::MM].probability - 0.001736) < 5e-7);
  CHECK(std::abs(d[GainClass::Mm].probability - 0.079861) < 5e-7);
  CHECK(std::abs(d[GainClass::mm].probability - 0.918403) < 5e-7);
}

TEST_CASE("gain probabilities sum to one for any beamwidth") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> width(1e-6, kTwoPi);
  for (int i = 0; i < 1000; ++i) {
    const auto d = gain_distribution(AntennaPattern{10.0, 0.1, width(gen)});
    double sum = 0;
    for (const auto& e : d.entries) {
      CHECK(e.probability >= 0);
      sum += e.probability;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(d.entries[0].gain > d.entries[1].gain);
    CHECK(d.entries[1].gain > d.entries[2].gain);
  }
}

TEST_CASE("path loss exponent switches at the ball radius") {
  const NetworkParams p;
  CHECK(path_loss_exponent(0.0, p) == p.alpha_los);
  CHECK(path_loss_exponent(141.0, p) == p.alpha_los);
  CHECK(path_loss_exponent(std::nextafter(141.0, 1e3), p) == p.alpha_nlos);
  CHECK(path_loss_exponent(200.0, p) == 4.0);
  CHECK_THROWS_AS(path_loss_exponent(-1.0, p), ParameterError);
}

TEST_CASE("serving distance density") {
  CHECK(serving_distance_pdf(0.0, 1e-4) == 0.0);
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  const double mass = integrate_finite([](double x) { return serving_distance_pdf(x, 1e-4); },
                                       0.0, 1e4, cfg);
  CHECK(std::abs(mass - 1.0) < 1e-9);
  // Stationary point 1 / sqrt(2 pi lambda).
  const double peak = 1.0 / std::sqrt(kTwoPi * 1e-4);
  CHECK(peak == doctest::Approx(39.894).epsilon(1e-4));
  CHECK(serving_distance_pdf(peak, 1e-4) > serving_distance_pdf(peak * 0.99, 1e-4));
  CHECK(serving_distance_pdf(peak, 1e-4) > serving_distance_pdf(peak * 1.01, 1e-4));
  for (double x : {0.5, 10.0, 1e3, 1e5}) CHECK(serving_distance_pdf(x, 1e-4) >= 0);
}

TEST_CASE("expected LOS interferers") {
  const NetworkParams p;
  CHECK(expected_los_interferers(40.0, 0.5, p) ==
        doctest::Approx(1e-4 * 0.5 * kPi * (141.0 * 141.0 - 1600.0)));
  CHECK(expected_los_interferers(200.0, 0.5, p) == 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((NetworkParams{1e-4, 141, 1.0, 4}.validate()), ParameterError);
  CHECK_THROWS_AS((NetworkParams{1e-4, 141, 4.0, 2.1}.validate()), ParameterError);
  CHECK_THROWS_AS((NetworkParams{-1.0, 141, 2.1, 4}.validate()), ParameterError);
  CHECK_NOTHROW((NetworkParams{0.0, 141, 2.1, 4}.validate()));
  CHECK_THROWS_AS((AntennaPattern{0.1, 10.0, 1.0}.validate()), ParameterError);
  CHECK_THROWS_AS((AntennaPattern{10.0, 0.1, 7.0}.validate()), ParameterError);
  CHECK_THROWS_AS((LinkBudget{4, -1, 1, 100}.validate()), ParameterError);
  CHECK_THROWS_AS(Modulation::psk(1), ParameterError);
}

TEST_CASE("modulation and link budget") {
  const auto bpsk = Modulation::psk(2);
  CHECK(bpsk.min_distance == 2.0);
  CHECK(bpsk.neighbor_count == 1);
  const auto qpsk = Modulation::psk(4);
  CHECK(qpsk.min_distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(qpsk.neighbor_count == 2);
  const auto b = LinkBudget::from_snr(10.0, 1e-6, 1.0, 100.0);
  CHECK(b.snr() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(b.symbol_energy == doctest::Approx(40.0).epsilon(1e-15));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
  CHECK(degrees_to_radians(180.0) == doctest::Approx(kPi));
}
