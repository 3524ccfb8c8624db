#pragma once

// Spectral calculus on one PolarLayout: per-ring Fourier modes, per-panel
// barycentric differentiation in r, and the Cauchy transform evaluated mode by
// mode. Sample vectors use the layout's flat order (ir * n_theta + it) and
// angles are measured about layout.center.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "jetex/model.hpp"

namespace jetex::polar {

/// Row ir holds the Fourier coefficients of ring ir; column j is mode mode_of(j).
using Modes = Eigen::MatrixXcd;

int mode_of(int column, int n_theta);

Modes analyze(const PolarLayout& L, std::span<const cplx> f);
std::vector<cplx> synthesize(const PolarLayout& L, const Modes& m);

std::vector<cplx> d_r(const PolarLayout& L, std::span<const cplx> f);
std::vector<cplx> d_theta(const PolarLayout& L, std::span<const cplx> f);
/// d/d(conj z) and d/dz.
std::vector<cplx> dbar(const PolarLayout& L, std::span<const cplx> f);
std::vector<cplx> dz(const PolarLayout& L, std::span<const cplx> f);
/// f_rr + f_r / r + f_thth / r^2 (four times d dbar).
std::vector<cplx> laplacian(const PolarLayout& L, std::span<const cplx> f);

/// Barycentric differentiation matrix on n Gauss-Legendre nodes of [-1, 1].
Eigen::MatrixXd gl_diff_matrix(int n);

/// u(z) = -(1/pi) int g(w) / (w - z) dA(w) over the layout's annulus, so that
/// dbar u = g. Computed per Fourier mode with panelwise Gauss quadrature.
std::vector<cplx> cauchy_transform(const PolarLayout& L, std::span<const cplx> g);

/// Same transform by direct node summation with singularity subtraction.
/// O(N^2) and only first-order accurate; used as an independent check.
std::vector<cplx> cauchy_direct(const PolarLayout& L, std::span<const cplx> g);

/// Laurent coefficients on ring ir: c_m = mode_m(r) / r^m for m in [m_lo, m_hi].
std::vector<cplx> ring_coefficients(const PolarLayout& L, std::span<const cplx> f, std::size_t ir,
                                    int m_lo, int m_hi);

/// Index of the ring whose radius is closest to r.
std::size_t nearest_ring(const PolarLayout& L, double r);

/// Evaluate the interpolant of f at z (barycentric in r within a panel,
/// trigonometric in theta).
cplx interpolate(const PolarLayout& L, std::span<const cplx> f, cplx z);

}  // namespace jetex::polar
