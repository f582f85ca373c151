// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be entered after the dispatcher has confirmed
// CPU support (see kernels.cpp).
#include <immintrin.h>

#include <cmath>

#include "pcp/kernels.hpp"

namespace pcp::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// exp for four doubles: round-to-nearest power-of-two reduction with a
// split ln2 and a degree-13 Taylor polynomial on |r| <= ln2/2. Inputs are
// clamped to [-708, 708]; lanes below -708 are flushed to zero to match the
// scalar reference contract.
inline __m256d exp4(__m256d x) {
  const __m256d kLog2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d kLn2Hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d kLn2Lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d kLoCut = _mm256_set1_pd(-708.0);
  const __m256d kHiCut = _mm256_set1_pd(708.0);

  const __m256d underflow = _mm256_cmp_pd(x, kLoCut, _CMP_LT_OQ);
  __m256d xc = _mm256_min_pd(_mm256_max_pd(x, kLoCut), kHiCut);

  __m256d n = _mm256_round_pd(
      _mm256_mul_pd(xc, kLog2e),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, kLn2Hi, xc);
  r = _mm256_fnmadd_pd(n, kLn2Lo, r);

  // Taylor coefficients 1/13!, 1/12!, ..., 1/2!, 1, 1.
  __m256d p = _mm256_set1_pd(1.6059043836821614599e-10);
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.0876756987868098979e-09));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.5052108385441718775e-08));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985890653e-07));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985892511e-06));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587301587301566e-05));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269841269841253e-04));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889419e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333333332177e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666666435e-02));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666666574e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^n via direct exponent-field construction (|n| <= 1021 after clamping).
  __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i bits = _mm256_slli_epi64(
      _mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  __m256d scale = _mm256_castsi256_pd(bits);

  __m256d result = _mm256_mul_pd(p, scale);
  return _mm256_andnot_pd(underflow, result);
}

}  // namespace

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

void exp_affine(const double* t, double a, double b, double* out,
                std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d z = _mm256_fmadd_pd(va, _mm256_loadu_pd(t + i), vb);
    _mm256_storeu_pd(out + i, exp4(z));
  }
  for (; i < n; ++i) {
    const double z = a * t[i] + b;
    out[i] = z < -708.0 ? 0.0 : std::exp(z);
  }
}

double sum_one_minus_exp_neg(const double* v, const double* w, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_xor_pd(_mm256_loadu_pd(v + i), neg);  // -v
    __m256d term = _mm256_sub_pd(one, exp4(x));
    if (w) term = _mm256_mul_pd(term, _mm256_loadu_pd(w + i));
    acc = _mm256_add_pd(acc, term);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double term = -std::expm1(-v[i]);
    total += w ? w[i] * term : term;
  }
  return total;
}

void sq_dist_accum(const double* x, double y, double* acc, std::size_t n) {
  const __m256d vy = _mm256_set1_pd(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vy);
    __m256d a = _mm256_loadu_pd(acc + i);
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(d, d, a));
  }
  for (; i < n; ++i) {
    const double d = x[i] - y;
    acc[i] += d * d;
  }
}

void em_update(double* x, const double* drift, const double* noise, double dt,
               double scale, std::size_t n) {
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xi = _mm256_loadu_pd(x + i);
    xi = _mm256_fmadd_pd(_mm256_loadu_pd(drift + i), vdt, xi);
    xi = _mm256_fmadd_pd(_mm256_loadu_pd(noise + i), vs, xi);
    _mm256_storeu_pd(x + i, xi);
  }
  for (; i < n; ++i) x[i] += drift[i] * dt + scale * noise[i];
}

}  // namespace pcp::kernels::avx2
