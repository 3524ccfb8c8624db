#include "jetex/error.hpp"
#include "jetex/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define JETEX_X86 1
#endif

namespace jetex::simd::avx2 {

#ifdef JETEX_X86

bool supported() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

// Lanes [a0, a1, a2, a3] -> (a0 + a2, a1 + a3).
__attribute__((target("avx2,fma"))) inline cplx pair_sum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo))};
}

// Weights [w0, w1] -> [w0, w0, w1, w1].
__attribute__((target("avx2,fma"))) inline __m256d widen(const double* w) {
  __m128d p = _mm_loadu_pd(w);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(p), 0b01010000);
}

}  // namespace

__attribute__((target("avx2,fma"))) double dot(std::span<const double> w,
                                                std::span<const double> x) {
  require(w.size() == x.size(), ErrorKind::Contract, "dot: length mismatch");
  std::size_t n = w.size(), i = 0;
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&x[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i + 4]), _mm256_loadu_pd(&x[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&w[i]), _mm256_loadu_pd(&x[i]), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * x[i];
  return s;
}

__attribute__((target("avx2,fma"))) cplx weighted_sum(std::span<const double> w,
                                                      std::span<const cplx> x) {
  require(w.size() == x.size(), ErrorKind::Contract, "weighted_sum: length mismatch");
  std::size_t n = w.size(), i = 0;
  const double* xp = reinterpret_cast<const double*>(x.data());
  __m256d acc = _mm256_setzero_pd();
  for (; i + 2 <= n; i += 2) acc = _mm256_fmadd_pd(widen(&w[i]), _mm256_loadu_pd(xp + 2 * i), acc);
  cplx s = pair_sum(acc);
  for (; i < n; ++i) s += w[i] * x[i];
  return s;
}

__attribute__((target("avx2,fma"))) cplx weighted_cdot(std::span<const double> w,
                                                       std::span<const cplx> a,
                                                       std::span<const cplx> b) {
  require(w.size() == a.size() && w.size() == b.size(), ErrorKind::Contract,
          "weighted_cdot: length mismatch");
  std::size_t n = w.size(), i = 0;
  const double* ap = reinterpret_cast<const double*>(a.data());
  const double* bp = reinterpret_cast<const double*>(b.data());
  // conj(a) b = (ar br + ai bi) + i (ar bi - ai br)
  __m256d same = _mm256_setzero_pd(), cross = _mm256_setzero_pd();
  for (; i + 2 <= n; i += 2) {
    __m256d W = widen(&w[i]);
    __m256d WA = _mm256_mul_pd(W, _mm256_loadu_pd(ap + 2 * i));
    __m256d B = _mm256_loadu_pd(bp + 2 * i);
    same = _mm256_fmadd_pd(WA, B, same);
    cross = _mm256_fmadd_pd(WA, _mm256_permute_pd(B, 0b0101), cross);
  }
  alignas(32) double c[4];
  _mm256_store_pd(c, cross);
  cplx s{hsum(same), (c[0] - c[1]) + (c[2] - c[3])};
  for (; i < n; ++i) s += w[i] * std::conj(a[i]) * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) cplx cauchy_sum(std::span<const double> w,
                                                    std::span<const cplx> z,
                                                    std::span<const cplx> g, cplx z0, cplx g0,
                                                    double exclude) {
  require(w.size() == z.size() && w.size() == g.size(), ErrorKind::Contract,
          "cauchy_sum: length mismatch");
  std::size_t n = w.size(), i = 0;
  const double* zp = reinterpret_cast<const double*>(z.data());
  const double* gp = reinterpret_cast<const double*>(g.data());
  const double ex2 = exclude * exclude;
  __m256d Z0 = _mm256_setr_pd(z0.real(), z0.imag(), z0.real(), z0.imag());
  __m256d G0 = _mm256_setr_pd(g0.real(), g0.imag(), g0.real(), g0.imag());
  __m256d EX = _mm256_set1_pd(ex2);
  __m256d zero = _mm256_setzero_pd();
  // n / d = n conj(d) / |d|^2: re = nr dr + ni di, im = ni dr - nr di
  __m256d same = zero, cross = zero;
  for (; i + 2 <= n; i += 2) {
    __m256d D = _mm256_sub_pd(_mm256_loadu_pd(zp + 2 * i), Z0);
    __m256d N = _mm256_sub_pd(_mm256_loadu_pd(gp + 2 * i), G0);
    __m256d DD = _mm256_mul_pd(D, D);
    __m256d d2 = _mm256_add_pd(DD, _mm256_permute_pd(DD, 0b0101));
    __m256d keep = _mm256_cmp_pd(d2, EX, _CMP_GT_OQ);
    __m256d S = _mm256_div_pd(widen(&w[i]), d2);
    S = _mm256_blendv_pd(zero, S, keep);
    __m256d SN = _mm256_mul_pd(S, N);
    same = _mm256_fmadd_pd(SN, D, same);
    cross = _mm256_fmadd_pd(SN, _mm256_permute_pd(D, 0b0101), cross);
  }
  alignas(32) double c[4];
  _mm256_store_pd(c, cross);
  cplx s{hsum(same), (c[1] - c[0]) + (c[3] - c[2])};
  if (i < n)
    s += scalar::cauchy_sum(w.subspan(i), z.subspan(i), g.subspan(i), z0, g0, exclude);
  return s;
}

#else

bool supported() { return false; }
double dot(std::span<const double> w, std::span<const double> x) { return scalar::dot(w, x); }
cplx weighted_sum(std::span<const double> w, std::span<const cplx> x) {
  return scalar::weighted_sum(w, x);
}
cplx weighted_cdot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b) {
  return scalar::weighted_cdot(w, a, b);
}
cplx cauchy_sum(std::span<const double> w, std::span<const cplx> z, std::span<const cplx> g,
                cplx z0, cplx g0, double exclude) {
  return scalar::cauchy_sum(w, z, g, z0, g0, exclude);
}

#endif

}  // namespace jetex::simd::avx2
