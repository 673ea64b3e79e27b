#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "mmw/error.hpp"
#include "mmw/kernels.hpp"

using namespace mmw::kernels;

namespace {

struct Draws {
  std::vector<double> u[5];
  explicit Draws(std::size_t n) {
    for (auto& v : u) v.resize(n);
  }
  InterfererDraws view() const {
    return {u[0].data(), u[1].data(), u[2].data(), u[3].data(), u[4].data()};
  }
};

InterfererParams make_params(double r0, double window, bool all_los) {
  InterfererParams p;
  p.r0_sq = r0 * r0;
  p.span_sq = window * window - r0 * r0;
  p.ball_sq = all_los ? std::numeric_limits<double>::infinity() : 141.0 * 141.0;
  p.half_alpha_los = 1.05;
  p.half_alpha_nlos = 2.0;
  p.cum_mm = 0.001736;
  p.cum_mm_mix = 0.001736 + 0.079861;
  p.amplitude[0] = std::sqrt(100.0 * 40.0);
  p.amplitude[1] = std::sqrt(1.0 * 40.0);
  p.amplitude[2] = std::sqrt(0.01 * 40.0);
  return p;
}

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v{&scalar_kernels()};
  if (const KernelTable* fast = avx2_kernels()) v.push_back(fast);
  return v;
}

}  // namespace

TEST_CASE("kernel selection") {
  CHECK(select_kernels("scalar").isa == Isa::scalar);
  CHECK(&select_kernels("auto") == &active_kernels() );
  CHECK_THROWS_AS(select_kernels("sse9"), mmw::ParameterError);
  if (avx2_supported()) {
    CHECK(select_kernels("avx2").isa == Isa::avx2);
  } else {
    CHECK_THROWS_AS(select_kernels("avx2"), mmw::ParameterError);
  }
}

TEST_CASE("every variant reproduces the reference term") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const InterfererParams p = make_params(40.0, 1410.0, false);
  for (const KernelTable* k : variants()) {
    CAPTURE(k->name);
    double worst = 0;
    for (int trial = 0; trial < 20000; ++trial) {
      double d[5];
      for (double& x : d) x = u(gen);
      if (trial % 7 == 0) d[2] = std::ldexp(d[2], -40);        // huge fading magnitude
      if (trial % 11 == 0) d[3] = 0.25 * (trial % 4);          // quadrant boundaries
      if (trial % 13 == 0) d[0] = (141.0 * 141.0 - p.r0_sq) / p.span_sq;  // ball edge
      // Four identical lanes isolate one term in the vector body.
      Draws four(4);
      for (int j = 0; j < 5; ++j)
        for (int l = 0; l < 4; ++l) four.u[j][l] = d[j];
      const double ref = interferer_term(p, d[0], d[1], d[2], d[3], d[4]);
      const double got = k->interference_sum(p, four.view(), 4) / 4.0;
      const double scale = std::abs(interferer_term(p, d[0], d[1], d[2], 0.0, 0.0));
      worst = std::max(worst, std::abs(got - ref) / std::max(scale, 1e-300));
    }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("interference sums agree across variants and lengths") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (bool all_los : {false, true}) {
    const InterfererParams p = make_params(25.0, all_los ? 800.0 : 1410.0, all_los);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 4099u}) {
      Draws d(n);
      for (auto& v : d.u)
        for (double& x : v) x = u(gen);
      double abs_sum = 0;
      for (std::size_t i = 0; i < n; ++i)
        abs_sum += std::abs(interferer_term(p, d.u[0][i], d.u[1][i], d.u[2][i], d.u[3][i], d.u[4][i]));
      const double ref = scalar_kernels().interference_sum(p, d.view(), n);
      for (const KernelTable* k : variants()) {
        CAPTURE(k->name);
        CAPTURE(n);
        CHECK(std::abs(k->interference_sum(p, d.view(), n) - ref) <= 1e-12 * abs_sum);
      }
    }
  }
}

TEST_CASE("cosine sums agree across variants") {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double scale : {0.0, 1e-3, 1.0, 37.5, 1e3})
    for (std::size_t n : {0u, 2u, 4u, 9u, 4096u}) {
      std::vector<double> v(n);
      for (double& x : v) x = 0.05 * g(gen);
      const double ref = scalar_kernels().cosine_sum(scale, v.data(), n);
      double bound = 0;
      for (double x : v) bound += 1e-14 * (1 + std::abs(scale * x));
      for (const KernelTable* k : variants()) {
        CAPTURE(k->name);
        CAPTURE(scale);
        CAPTURE(n);
        CHECK(std::abs(k->cosine_sum(scale, v.data(), n) - ref) <= bound + 1e-13 * n);
      }
    }
}
