#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and an
// AVX2/FMA version; the active backend is picked once at startup from CPUID
// (override with JETEX_SIMD=scalar). The two backends agree to rounding, and
// each is deterministic on its own.

#include <complex>
#include <span>
#include <string_view>

namespace jetex::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

Backend active_backend();
void set_backend(Backend b);
bool backend_available(Backend b);
std::string_view backend_name(Backend b);

/// Sum of w[i] * x[i].
double dot(std::span<const double> w, std::span<const double> x);

/// Sum of w[i] * x[i] for complex x.
cplx weighted_sum(std::span<const double> w, std::span<const cplx> x);

/// Sum of w[i] * conj(a[i]) * b[i].
cplx weighted_cdot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b);

/// Sum over nodes j with |z[j] - z0| > exclude of w[j] * (g[j] - g0) / (z[j] - z0).
cplx cauchy_sum(std::span<const double> w, std::span<const cplx> z, std::span<const cplx> g,
                cplx z0, cplx g0, double exclude);

namespace scalar {
double dot(std::span<const double> w, std::span<const double> x);
cplx weighted_sum(std::span<const double> w, std::span<const cplx> x);
cplx weighted_cdot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b);
cplx cauchy_sum(std::span<const double> w, std::span<const cplx> z, std::span<const cplx> g,
                cplx z0, cplx g0, double exclude);
}  // namespace scalar

namespace avx2 {
bool supported();
double dot(std::span<const double> w, std::span<const double> x);
cplx weighted_sum(std::span<const double> w, std::span<const cplx> x);
cplx weighted_cdot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b);
cplx cauchy_sum(std::span<const double> w, std::span<const cplx> z, std::span<const cplx> g,
                cplx z0, cplx g0, double exclude);
}  // namespace avx2

}  // namespace jetex::simd
