#include <cmath>

#include "mmw/kernels.hpp"

namespace mmw::kernels {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double interference_sum_scalar(const InterfererParams& p, const InterfererDraws& d,
                               std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sum += interferer_term(p, d.radius[i], d.gain_class[i], d.magnitude[i], d.phase[i],
                           d.symbol[i]);
  return sum;
}

double cosine_sum_scalar(double scale, const double* v, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::cos(scale * v[i]);
  return sum;
}

}  // namespace

double interferer_term(const InterfererParams& p, double u_radius, double u_class,
                       double u_magnitude, double u_phase, double u_symbol) {
  const double r_sq = p.r0_sq + u_radius * p.span_sq;
  const double half_alpha = r_sq <= p.ball_sq ? p.half_alpha_los : p.half_alpha_nlos;
  const double path = std::exp(-half_alpha * std::log(r_sq));
  const double amp = u_class < p.cum_mm       ? p.amplitude[0]
                     : u_class < p.cum_mm_mix ? p.amplitude[1]
                                              : p.amplitude[2];
  const double magnitude = std::sqrt(-std::log(u_magnitude));
  return amp * path * magnitude * std::cos(kTwoPi * (u_phase + u_symbol));
}

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, "scalar", interference_sum_scalar,
                                 cosine_sum_scalar};
  return table;
}

}  // namespace mmw::kernels
