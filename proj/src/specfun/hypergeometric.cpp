#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mmw/error.hpp"
#include "mmw/specfun.hpp"

namespace mmw {
namespace {

constexpr int kMaxTerms = 10000;
// Series terms below this fraction of the partial sum count as negligible.
constexpr double kSeriesTail = 1e-17;
// Largest tolerated ratio max|term| / |sum| for the plain double series.
constexpr double kDoubleCancellation = 1e2;

struct Params {
  std::vector<double> a;
  std::vector<double> b;
};

bool nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

double rgamma(double x) { return nonpositive_integer(x) ? 0.0 : 1.0 / std::tgamma(x); }

void cancel_common(Params& p) {
  for (auto ia = p.a.begin(); ia != p.a.end();) {
    auto ib = std::find(p.b.begin(), p.b.end(), *ia);
    if (ib != p.b.end()) {
      p.b.erase(ib);
      ia = p.a.erase(ia);
    } else {
      ++ia;
    }
  }
}

double term_ratio(const Params& p, double z, int k) {
  double r = z / (k + 1.0);
  for (double a : p.a) r *= a + k;
  for (double b : p.b) r /= b + k;
  return r;
}

struct SeriesOutcome {
  double value = 0;
  double max_term = 0;
  bool converged = false;
  int terms = 0;
};

SeriesOutcome series_double(const Params& p, double z) {
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;  // Kahan compensation
  double max_term = 1.0;
  int small_run = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= term_ratio(p, z, k);
    if (term == 0.0) return {sum + comp, max_term, true, k + 1};
    if (!std::isfinite(term)) return {sum, max_term, false, k + 1};
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    max_term = std::max(max_term, std::abs(term));
    const bool past_peak = std::abs(term_ratio(p, z, k + 1)) < 1.0;
    small_run = (past_peak && std::abs(term) <= kSeriesTail * std::abs(sum)) ? small_run + 1 : 0;
    if (small_run >= 3) return {sum - comp, max_term, true, k + 1};
  }
  return {sum, max_term, false, kMaxTerms};
}

// log2 of the largest term magnitude and the number of terms needed for the
// tail to fall 2^-tail_bits below it.
struct SeriesShape {
  double peak_log2 = 0;
  int terms = 0;
};

SeriesShape series_shape(const Params& p, double z, double tail_bits) {
  double log2_term = 0;
  SeriesShape shape;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double r = term_ratio(p, z, k);
    if (r == 0.0) {
      shape.terms = k + 1;
      return shape;
    }
    log2_term += std::log2(std::abs(r));
    shape.peak_log2 = std::max(shape.peak_log2, log2_term);
    if (std::abs(term_ratio(p, z, k + 1)) < 1.0 && log2_term < shape.peak_log2 - tail_bits) {
      shape.terms = k + 1;
      return shape;
    }
  }
  throw NumericFailure("hypergeometric series needs more than " + std::to_string(kMaxTerms) +
                           " terms at z=" + std::to_string(z),
                       std::numeric_limits<double>::quiet_NaN(), shape.peak_log2, kMaxTerms);
}

class MpfrVar {
 public:
  explicit MpfrVar(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~MpfrVar() { mpfr_clear(v_); }
  MpfrVar(const MpfrVar&) = delete;
  MpfrVar& operator=(const MpfrVar&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

struct MpfrOutcome {
  double value;
  long cancellation_bits;  // exponent of the largest term minus that of the sum
  bool converged;
};

MpfrOutcome series_mpfr(const Params& p, double z, mpfr_prec_t bits, int max_terms) {
  MpfrVar term(bits), sum(bits), num(bits), den(bits), tmp(bits);
  mpfr_set_ui(term.get(), 1, MPFR_RNDN);
  mpfr_set_ui(sum.get(), 1, MPFR_RNDN);
  long max_exp = 1;
  int small_run = 0;
  bool converged = false;
  for (int k = 0; k < max_terms && !converged; ++k) {
    mpfr_set_d(num.get(), z, MPFR_RNDN);
    for (double a : p.a) {
      mpfr_set_d(tmp.get(), a, MPFR_RNDN);
      mpfr_add_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(k), MPFR_RNDN);
      mpfr_mul(num.get(), num.get(), tmp.get(), MPFR_RNDN);
    }
    mpfr_set_ui(den.get(), static_cast<unsigned long>(k + 1), MPFR_RNDN);
    for (double b : p.b) {
      mpfr_set_d(tmp.get(), b, MPFR_RNDN);
      mpfr_add_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(k), MPFR_RNDN);
      mpfr_mul(den.get(), den.get(), tmp.get(), MPFR_RNDN);
    }
    mpfr_mul(term.get(), term.get(), num.get(), MPFR_RNDN);
    mpfr_div(term.get(), term.get(), den.get(), MPFR_RNDN);
    if (mpfr_zero_p(term.get())) {
      converged = true;
      break;
    }
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
    max_exp = std::max<long>(max_exp, mpfr_get_exp(term.get()));
    const bool negligible =
        mpfr_zero_p(sum.get()) == 0 &&
        mpfr_get_exp(term.get()) < mpfr_get_exp(sum.get()) - 64 &&
        std::abs(term_ratio(p, z, k + 1)) < 1.0;
    small_run = negligible ? small_run + 1 : 0;
    converged = small_run >= 3;
  }
  const long sum_exp = mpfr_zero_p(sum.get()) ? std::numeric_limits<int>::min() / 2
                                              : mpfr_get_exp(sum.get());
  return {mpfr_get_d(sum.get(), MPFR_RNDN), max_exp - sum_exp, converged};
}

double series_extended(const Params& p, double z) {
  const SeriesShape shape = series_shape(p, z, 80.0);
  mpfr_prec_t bits = static_cast<mpfr_prec_t>(96 + std::max(0.0, shape.peak_log2));
  const int max_terms = kMaxTerms;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const MpfrOutcome out = series_mpfr(p, z, bits, max_terms);
    if (!out.converged)
      throw NumericFailure("hypergeometric series did not converge at z=" + std::to_string(z),
                           out.value, static_cast<double>(out.cancellation_bits), max_terms);
    // 64 bits of headroom beyond the cancellation leaves ~1e-19 relative error.
    if (out.cancellation_bits + 64 <= static_cast<long>(bits)) return out.value;
    bits = static_cast<mpfr_prec_t>(out.cancellation_bits + 96);
    if (bits > 1 << 20) break;
  }
  throw NumericFailure("hypergeometric series lost all precision at z=" + std::to_string(z),
                       std::numeric_limits<double>::quiet_NaN(), static_cast<double>(bits), 4);
}

// Algebraic asymptotic expansion of pFp(a; b; -y) for large y, valid when the
// numerator parameters do not differ by integers. The exponentially small
// e^{-y} part is checked against the result and must be negligible.
std::optional<double> asymptotic_negative(const Params& p, double z) {
  const double y = -z;
  if (p.a.size() != p.b.size() || y < 40.0) return std::nullopt;
  for (std::size_t i = 0; i < p.a.size(); ++i)
    for (std::size_t j = i + 1; j < p.a.size(); ++j) {
      const double d = p.a[i] - p.a[j];
      if (d == std::round(d)) return std::nullopt;
    }
  double total = 0;
  double worst_tail = 0;
  for (std::size_t m = 0; m < p.a.size(); ++m) {
    const double am = p.a[m];
    double pref = std::pow(y, -am);
    for (double b : p.b) pref *= std::tgamma(b) * rgamma(b - am);
    for (std::size_t j = 0; j < p.a.size(); ++j)
      if (j != m) pref *= std::tgamma(p.a[j] - am) * rgamma(p.a[j]);
    if (pref == 0.0) continue;
    double t = 1.0;
    double s = 1.0;
    double last = 1.0;
    for (int k = 0; k < 400; ++k) {
      double r = (am + k) / ((k + 1.0) * y);
      for (double b : p.b) r *= 1.0 + am - b + k;
      for (std::size_t j = 0; j < p.a.size(); ++j)
        if (j != m) r /= 1.0 + am - p.a[j] + k;
      const double next = t * r;
      if (std::abs(next) >= std::abs(t) && k > 0) break;  // optimal truncation
      t = next;
      s += t;
      last = std::abs(t);
      if (last <= kSeriesTail * std::abs(s)) break;
    }
    total += pref * s;
    worst_tail = std::max(worst_tail, std::abs(pref) * last);
  }
  double sum_a = 0;
  double sum_b = 0;
  double gamma_ratio = 1;
  for (double a : p.a) {
    sum_a += a;
    gamma_ratio *= rgamma(a);
  }
  for (double b : p.b) {
    sum_b += b;
    gamma_ratio *= std::tgamma(b);
  }
  const double exponential = std::abs(gamma_ratio) * std::exp(-y + (sum_a - sum_b) * std::log(y));
  if (!std::isfinite(total) || total == 0.0) return std::nullopt;
  if (worst_tail + exponential > 1e-14 * std::abs(total)) return std::nullopt;
  return total;
}

double evaluate(Params p, double z) {
  for (double b : p.b)
    if (nonpositive_integer(b))
      throw ParameterError("hypergeometric denominator parameter is a nonpositive integer: " +
                           std::to_string(b));
  if (!std::isfinite(z)) throw ParameterError("hypergeometric argument must be finite");
  if (z == 0.0) return 1.0;
  cancel_common(p);
  if (p.a.empty() && p.b.empty()) return std::exp(z);
  const bool polynomial = std::any_of(p.a.begin(), p.a.end(), nonpositive_integer);

  if (!polynomial && p.a.size() == 1 && p.b.size() == 1 && z < 0) {
    const double a = p.a[0];
    const double b = p.b[0];
    if (b == a + 1.0 && a > -1.0 && a < 0.0) return 1.0 + confluent_kernel_m1(-a, -z);
    // Kummer: e^z 1F1(b - a; b; -z) has positive terms when b > a and b > 0.
    if (b > a && b > 0 && -z <= 600.0) {
      const SeriesOutcome pos = series_double(Params{{b - a}, {b}}, -z);
      if (pos.converged) return std::exp(z) * pos.value;
    }
  }
  if (!polynomial && z < 0) {
    if (auto v = asymptotic_negative(p, z)) return *v;
  }
  const SeriesOutcome plain = series_double(p, z);
  if (plain.converged && plain.value != 0.0 &&
      plain.max_term <= kDoubleCancellation * std::abs(plain.value))
    return plain.value;
  return series_extended(p, z);
}

}  // namespace

double hyp1f2(double a, double b1, double b2, double z) { return evaluate({{a}, {b1, b2}}, z); }

double hyp2f2(double a1, double a2, double b1, double b2, double z) {
  return evaluate({{a1, a2}, {b1, b2}}, z);
}

double hyp1f1(double a, double b, double z) { return evaluate({{a}, {b}}, z); }

}  // namespace mmw
