#include "mmw/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "mmw/error.hpp"

namespace mmw {
namespace {

// Kronrod abscissae (descending) with Gauss-7 nodes at the odd positions.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  resk *= half;
  resg *= half;
  return {a, b, resk, std::abs(resk - resg)};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0) || !(tail_threshold > 0))
    throw ParameterError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw ParameterError("max_subdivisions must be >= 1");
}

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureConfig& cfg) {
  cfg.validate();
  if (a == b) return {};
  if (b < a) {
    auto r = integrate_adaptive(f, b, a, cfg);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> heap;
  Segment first = kronrod15(f, a, b);
  if (!std::isfinite(first.value))
    throw NumericFailure("integrand is not finite on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]",
                         first.value, first.error, 0);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  std::vector<Segment> frozen;  // too narrow to split further
  int splits = 0;
  while (!heap.empty()) {
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    if (splits >= cfg.max_subdivisions)
      throw NumericFailure("adaptive quadrature exceeded subdivision cap", total, total_err,
                           splits);
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 64 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      if (heap.empty())
        throw NumericFailure("adaptive quadrature hit roundoff limit", total, total_err, splits);
      continue;
    }
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    if (!std::isfinite(total))
      throw NumericFailure("integrand produced a non-finite value", total, total_err, splits);
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-add segment values left to right; the running sum drifts by rounding.
  std::vector<Segment> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  QuadratureResult r{0, 0, splits};
  for (const auto& s : all) {
    r.value += s.value;
    r.abs_error += s.error;
  }
  return r;
}

double integrate_finite(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  return integrate_adaptive(f, a, b, cfg).value;
}

double integrate_semi_infinite(const Integrand& f, double a, const QuadratureConfig& cfg,
                               const PanelSchedule& panels) {
  cfg.validate();
  if (!(panels.width > 0) || !(panels.growth >= 1) || panels.max_panels < 1)
    throw ParameterError("invalid panel schedule");
  double sum = 0;
  double lo = a;
  double width = panels.width;
  double previous = std::numeric_limits<double>::infinity();
  double peak = 0;
  int decreasing_run = 0;
  int small_run = 0;
  QuadratureConfig panel_cfg = cfg;
  for (int k = 0; k < panels.max_panels; ++k) {
    const double hi = lo + width;
    panel_cfg.abs_tol = std::max(cfg.abs_tol * 1e-2, cfg.rel_tol * 1e-2 * std::abs(sum));
    const double piece = integrate_adaptive(f, lo, hi, panel_cfg).value;
    sum += piece;
    const double mag = std::abs(piece);
    peak = std::max(peak, mag);
    decreasing_run = (mag <= previous && peak > 0) ? decreasing_run + 1 : 0;
    previous = mag;
    const bool small = mag <= cfg.tail_threshold * std::abs(sum) + cfg.abs_tol;
    small_run = (small && (decreasing_run >= 2 || peak == 0)) ? small_run + 1 : 0;
    // Two consecutive negligible panels after the decay has set in.
    if (small_run >= 2) return sum;
    lo = hi;
    width *= panels.growth;
    if (!std::isfinite(lo) || !std::isfinite(sum)) break;
  }
  throw NumericFailure("semi-infinite integral did not decay", sum, previous, panels.max_panels);
}

}  // namespace mmw
