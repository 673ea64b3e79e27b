// AVX2/FMA variants of the Monte Carlo kernels. Compiled with -mavx2 -mfma
// and only called after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "mmw/kernels.hpp"

namespace mmw::kernels {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.4426950408889634073599;
constexpr double kSqrtHalf = 0.70710678118654752440;
// 2^52 + 2^51: adding it moves a small integer-valued double into the low
// mantissa bits.
constexpr double kRoundMagic = 6755399441055744.0;

inline __m256d set1(double x) { return _mm256_set1_pd(x); }

inline __m256i to_int64(__m256d integral) {
  const __m256d magic = set1(kRoundMagic);
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(integral, magic)),
                          _mm256_castpd_si256(magic));
}

// e^x for |x| < 708: x = n ln2 + r, |r| <= ln2 / 2, degree-13 Taylor for e^r.
inline __m256d exp_pd(__m256d x) {
  x = _mm256_max_pd(_mm256_min_pd(x, set1(708.0)), set1(-708.0));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, set1(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, set1(kLn2Hi), x);
  r = _mm256_fnmadd_pd(n, set1(kLn2Lo), r);
  __m256d p = set1(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, set1(0.5));
  p = _mm256_fmadd_pd(p, r, set1(1.0));
  p = _mm256_fmadd_pd(p, r, set1(1.0));
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(to_int64(n), _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// ln x for positive normal x: x = m 2^e with m in [sqrt(1/2), sqrt(2)),
// ln m = 2 atanh((m - 1) / (m + 1)) summed to f^23.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
  const __m256i mant_bits =
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                      _mm256_set1_epi64x(0x3FF0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant_bits);
  // Exponent field as a double: OR it into the mantissa of 2^52.
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_set1_epi64x(0x4330000000000000LL))),
      set1(4503599627370496.0));
  e = _mm256_sub_pd(e, set1(1023.0));
  const __m256d big = _mm256_cmp_pd(m, set1(1.0 / kSqrtHalf), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, set1(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, set1(1.0)));
  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, set1(1.0)), _mm256_add_pd(m, set1(1.0)));
  const __m256d f2 = _mm256_mul_pd(f, f);
  __m256d p = set1(1.0 / 23.0);
  for (int k = 21; k >= 1; k -= 2) p = _mm256_fmadd_pd(p, f2, set1(1.0 / k));
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(f, f), p);
  return _mm256_fmadd_pd(e, set1(kLn2Hi), _mm256_fmadd_pd(e, set1(kLn2Lo), log_m));
}

// cos(2 pi t): reduce to s in [-1/8, 1/8] plus a quadrant, then Taylor
// polynomials for sin and cos on [-pi/4, pi/4].
inline __m256d cos_turns_pd(__m256d t) {
  constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  t = _mm256_sub_pd(t, _mm256_round_pd(t, kNearest));
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(t, set1(4.0)), kNearest);
  const __m256d s = _mm256_fnmadd_pd(q, set1(0.25), t);
  const __m256d x = _mm256_mul_pd(s, set1(kTwoPi));
  const __m256d x2 = _mm256_mul_pd(x, x);

  __m256d sp = set1(-1.0 / 1307674368000.0);  // -1/15!
  sp = _mm256_fmadd_pd(sp, x2, set1(1.0 / 6227020800.0));
  sp = _mm256_fmadd_pd(sp, x2, set1(-1.0 / 39916800.0));
  sp = _mm256_fmadd_pd(sp, x2, set1(1.0 / 362880.0));
  sp = _mm256_fmadd_pd(sp, x2, set1(-1.0 / 5040.0));
  sp = _mm256_fmadd_pd(sp, x2, set1(1.0 / 120.0));
  sp = _mm256_fmadd_pd(sp, x2, set1(-1.0 / 6.0));
  sp = _mm256_fmadd_pd(sp, x2, set1(1.0));
  const __m256d sin_x = _mm256_mul_pd(sp, x);

  __m256d cp = set1(1.0 / 20922789888000.0);  // 1/16!
  cp = _mm256_fmadd_pd(cp, x2, set1(-1.0 / 87178291200.0));
  cp = _mm256_fmadd_pd(cp, x2, set1(1.0 / 479001600.0));
  cp = _mm256_fmadd_pd(cp, x2, set1(-1.0 / 3628800.0));
  cp = _mm256_fmadd_pd(cp, x2, set1(1.0 / 40320.0));
  cp = _mm256_fmadd_pd(cp, x2, set1(-1.0 / 720.0));
  cp = _mm256_fmadd_pd(cp, x2, set1(1.0 / 24.0));
  cp = _mm256_fmadd_pd(cp, x2, set1(-0.5));
  const __m256d cos_x = _mm256_fmadd_pd(cp, x2, set1(1.0));

  // cos(x + q pi/2): q = 0 cos, 1 -sin, 2 -cos, 3 sin (q taken mod 4).
  const __m256i qi = to_int64(q);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d use_sin =
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, one), one));
  const __m256i sign = _mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(qi, one), two), 62);
  const __m256d v = _mm256_blendv_pd(cos_x, sin_x, use_sin);
  return _mm256_xor_pd(v, _mm256_castsi256_pd(sign));
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double interference_sum_avx2(const InterfererParams& p, const InterfererDraws& d, std::size_t n) {
  const __m256d r0_sq = set1(p.r0_sq);
  const __m256d span_sq = set1(p.span_sq);
  const __m256d ball_sq = set1(p.ball_sq);
  const __m256d neg_half_los = set1(-p.half_alpha_los);
  const __m256d neg_half_nlos = set1(-p.half_alpha_nlos);
  const __m256d cum_mm = set1(p.cum_mm);
  const __m256d cum_mix = set1(p.cum_mm_mix);
  const __m256d amp0 = set1(p.amplitude[0]);
  const __m256d amp1 = set1(p.amplitude[1]);
  const __m256d amp2 = set1(p.amplitude[2]);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r_sq = _mm256_fmadd_pd(_mm256_loadu_pd(d.radius + i), span_sq, r0_sq);
    const __m256d los = _mm256_cmp_pd(r_sq, ball_sq, _CMP_LE_OQ);
    const __m256d neg_half = _mm256_blendv_pd(neg_half_nlos, neg_half_los, los);
    const __m256d path = exp_pd(_mm256_mul_pd(neg_half, log_pd(r_sq)));
    const __m256d uc = _mm256_loadu_pd(d.gain_class + i);
    __m256d amp = _mm256_blendv_pd(amp2, amp1, _mm256_cmp_pd(uc, cum_mix, _CMP_LT_OQ));
    amp = _mm256_blendv_pd(amp, amp0, _mm256_cmp_pd(uc, cum_mm, _CMP_LT_OQ));
    const __m256d mag = _mm256_sqrt_pd(
        _mm256_sub_pd(_mm256_setzero_pd(), log_pd(_mm256_loadu_pd(d.magnitude + i))));
    const __m256d turns =
        _mm256_add_pd(_mm256_loadu_pd(d.phase + i), _mm256_loadu_pd(d.symbol + i));
    const __m256d term = _mm256_mul_pd(_mm256_mul_pd(amp, path), _mm256_mul_pd(mag, cos_turns_pd(turns)));
    acc = _mm256_add_pd(acc, term);
  }
  double sum = horizontal_sum(acc);
  for (; i < n; ++i)
    sum += interferer_term(p, d.radius[i], d.gain_class[i], d.magnitude[i], d.phase[i],
                           d.symbol[i]);
  return sum;
}

double cosine_sum_avx2(double scale, const double* v, std::size_t n) {
  const __m256d turns_per_unit = set1(scale / kTwoPi);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, cos_turns_pd(_mm256_mul_pd(_mm256_loadu_pd(v + i), turns_per_unit)));
  double sum = horizontal_sum(acc);
  for (; i < n; ++i) sum += std::cos(scale * v[i]);
  return sum;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{Isa::avx2, "avx2", interference_sum_avx2, cosine_sum_avx2};
  return table;
}

}  // namespace mmw::kernels
