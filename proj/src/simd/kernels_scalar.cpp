#include <cmath>

#include "jetex/error.hpp"
#include "jetex/simd.hpp"

namespace jetex::simd::scalar {

double dot(std::span<const double> w, std::span<const double> x) {
  require(w.size() == x.size(), ErrorKind::Contract, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
  return s;
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> x) {
  require(w.size() == x.size(), ErrorKind::Contract, "weighted_sum: length mismatch");
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    re += w[i] * x[i].real();
    im += w[i] * x[i].imag();
  }
  return {re, im};
}

cplx weighted_cdot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b) {
  require(w.size() == a.size() && w.size() == b.size(), ErrorKind::Contract,
          "weighted_cdot: length mismatch");
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
    re += w[i] * (ar * br + ai * bi);
    im += w[i] * (ar * bi - ai * br);
  }
  return {re, im};
}

cplx cauchy_sum(std::span<const double> w, std::span<const cplx> z, std::span<const cplx> g,
                cplx z0, cplx g0, double exclude) {
  require(w.size() == z.size() && w.size() == g.size(), ErrorKind::Contract,
          "cauchy_sum: length mismatch");
  double ex2 = exclude * exclude;
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double dr = z[i].real() - z0.real(), di = z[i].imag() - z0.imag();
    double d2 = dr * dr + di * di;
    if (d2 <= ex2) continue;
    double nr = g[i].real() - g0.real(), ni = g[i].imag() - g0.imag();
    // (n / d) = n * conj(d) / |d|^2
    double s = w[i] / d2;
    re += s * (nr * dr + ni * di);
    im += s * (ni * dr - nr * di);
  }
  return {re, im};
}

}  // namespace jetex::simd::scalar
