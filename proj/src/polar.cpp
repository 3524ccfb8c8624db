#include "jetex/polar.hpp"

#include <cmath>
#include <numbers>

#include "jetex/error.hpp"
#include "jetex/parallel.hpp"
#include "jetex/simd.hpp"

namespace jetex::polar {

using std::numbers::pi;

namespace {

void check_size(const PolarLayout& L, std::size_t n) {
  require(n == L.size(), ErrorKind::Contract, "polar: samples not aligned with layout");
}

std::vector<double> bary_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 1.0);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = 0; k < x.size(); ++k)
      if (k != j) w[j] /= (x[j] - x[k]);
  return w;
}

// Rows: targets; columns: sources.
Eigen::MatrixXd interp_matrix(const std::vector<double>& xs, const std::vector<double>& bw,
                              const std::vector<double>& ys) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(ys.size(), xs.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    double den = 0;
    std::ptrdiff_t hit = -1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      double d = ys[i] - xs[j];
      if (d == 0) {
        hit = static_cast<std::ptrdiff_t>(j);
        break;
      }
      P(i, j) = bw[j] / d;
      den += P(i, j);
    }
    if (hit >= 0) {
      P.row(i).setZero();
      P(i, hit) = 1;
    } else {
      P.row(i) /= den;
    }
  }
  return P;
}

std::vector<double> panel_radii(const PolarLayout& L, int p) {
  auto b = L.radii.begin() + static_cast<std::ptrdiff_t>(p) * L.nodes_per_panel;
  return {b, b + L.nodes_per_panel};
}

std::vector<cplx> twiddles(int n) {
  std::vector<cplx> t(n);
  for (int k = 0; k < n; ++k) t[k] = std::polar(1.0, -2 * pi * k / n);
  return t;
}

}  // namespace

int mode_of(int column, int n_theta) { return column < (n_theta + 1) / 2 ? column : column - n_theta; }

Modes analyze(const PolarLayout& L, std::span<const cplx> f) {
  check_size(L, f.size());
  const int N = L.n_theta;
  auto tw = twiddles(N);
  Modes M(L.n_radial(), N);
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir) {
    const cplx* ring = f.data() + ir * N;
    for (int j = 0; j < N; ++j) {
      int m = ((mode_of(j, N) % N) + N) % N;
      cplx s = 0;
      for (int it = 0; it < N; ++it) s += ring[it] * tw[(static_cast<long>(m) * it) % N];
      M(ir, j) = s / double(N);
    }
  }
  return M;
}

std::vector<cplx> synthesize(const PolarLayout& L, const Modes& M) {
  const int N = L.n_theta;
  require(M.rows() == static_cast<long>(L.n_radial()) && M.cols() == N, ErrorKind::Contract,
          "synthesize: mode matrix shape");
  auto tw = twiddles(N);
  std::vector<cplx> f(L.size());
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir)
    for (int it = 0; it < N; ++it) {
      cplx s = 0;
      for (int j = 0; j < N; ++j) {
        int m = ((mode_of(j, N) % N) + N) % N;
        s += M(ir, j) * std::conj(tw[(static_cast<long>(m) * it) % N]);
      }
      f[ir * N + it] = s;
    }
  return f;
}

Eigen::MatrixXd gl_diff_matrix(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  auto bw = bary_weights(x);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (bw[j] / bw[i]) / (x[i] - x[j]);
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  return D;
}

std::vector<cplx> d_r(const PolarLayout& L, std::span<const cplx> f) {
  check_size(L, f.size());
  const int N = L.n_theta, q = L.nodes_per_panel;
  Eigen::MatrixXd D = gl_diff_matrix(q);
  std::vector<cplx> out(f.size());
  for (int p = 0; p < L.panel_count(); ++p) {
    double scale = 2 / (L.breaks[p + 1] - L.breaks[p]);
    for (int i = 0; i < q; ++i) {
      std::size_t row = static_cast<std::size_t>(p) * q + i;
      for (int it = 0; it < N; ++it) {
        cplx s = 0;
        for (int j = 0; j < q; ++j) s += D(i, j) * f[(static_cast<std::size_t>(p) * q + j) * N + it];
        out[row * N + it] = s * scale;
      }
    }
  }
  return out;
}

std::vector<cplx> d_theta(const PolarLayout& L, std::span<const cplx> f) {
  Modes M = analyze(L, f);
  const int N = L.n_theta;
  for (int j = 0; j < N; ++j) {
    int m = mode_of(j, N);
    cplx factor = (N % 2 == 0 && m == -N / 2) ? cplx(0) : cplx(0, m);
    M.col(j) *= factor;
  }
  return synthesize(L, M);
}

namespace {

// (e^{+-i theta} / 2) (f_r +- (i / r) f_theta)
std::vector<cplx> wirtinger(const PolarLayout& L, std::span<const cplx> f, double sign) {
  auto fr = d_r(L, f);
  auto ft = d_theta(L, f);
  const int N = L.n_theta;
  std::vector<cplx> out(f.size());
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir) {
    double r = L.radii[ir];
    for (int it = 0; it < N; ++it) {
      std::size_t k = ir * N + it;
      cplx e = std::polar(1.0, sign * 2 * pi * it / N);
      out[k] = 0.5 * e * (fr[k] + cplx(0, sign) * ft[k] / r);
    }
  }
  return out;
}

}  // namespace

std::vector<cplx> dbar(const PolarLayout& L, std::span<const cplx> f) { return wirtinger(L, f, 1.0); }
std::vector<cplx> dz(const PolarLayout& L, std::span<const cplx> f) { return wirtinger(L, f, -1.0); }

std::vector<cplx> laplacian(const PolarLayout& L, std::span<const cplx> f) {
  auto fr = d_r(L, f);
  auto frr = d_r(L, fr);
  auto ftt = d_theta(L, d_theta(L, f));
  const int N = L.n_theta;
  std::vector<cplx> out(f.size());
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir) {
    double r = L.radii[ir];
    for (int it = 0; it < N; ++it) {
      std::size_t k = ir * N + it;
      out[k] = frr[k] + fr[k] / r + ftt[k] / (r * r);
    }
  }
  return out;
}

std::vector<cplx> cauchy_transform(const PolarLayout& L, std::span<const cplx> g) {
  Modes G = analyze(L, g);
  const int N = L.n_theta, q = L.nodes_per_panel;
  const std::size_t nr = L.n_radial();
  std::vector<double> gx, gw;
  gauss_legendre(q, gx, gw);
  Modes U = Modes::Zero(nr, N);

  parallel_for(nr, [&](std::size_t i) {
    const int p = static_cast<int>(i) / q;
    const double r = L.radii[i], a = L.breaks[p], b = L.breaks[p + 1];
    auto xs = panel_radii(L, p);
    auto bw = bary_weights(xs);
    // sub-interval Gauss rules on [r, b] and [a, r]
    std::vector<double> up_x(q), up_w(q), lo_x(q), lo_w(q);
    for (int s = 0; s < q; ++s) {
      up_x[s] = r + (b - r) * (1 + gx[s]) / 2;
      up_w[s] = (b - r) / 2 * gw[s];
      lo_x[s] = a + (r - a) * (1 + gx[s]) / 2;
      lo_w[s] = (r - a) / 2 * gw[s];
    }
    Eigen::MatrixXd Pup = interp_matrix(xs, bw, up_x), Plo = interp_matrix(xs, bw, lo_x);
    for (int j = 0; j < N; ++j) {
      const int m = mode_of(j, N);
      if (N % 2 == 0 && m == -N / 2) continue;
      Eigen::VectorXcd gp = G.block(static_cast<long>(p) * q, j, q, 1);
      cplx K = 0;
      if (m >= 1) {
        Eigen::VectorXcd gs = Pup * gp;
        for (int s = 0; s < q; ++s) K += up_w[s] * gs[s] * std::pow(r / up_x[s], m - 1);
        for (std::size_t l = static_cast<std::size_t>(p + 1) * q; l < nr; ++l)
          K += L.radial_weights[l] * G(l, j) * std::pow(r / L.radii[l], m - 1);
      } else {
        Eigen::VectorXcd gs = Plo * gp;
        for (int s = 0; s < q; ++s) K -= lo_w[s] * gs[s] * std::pow(lo_x[s] / r, 1 - m);
        for (std::size_t l = 0; l < static_cast<std::size_t>(p) * q; ++l)
          K -= L.radial_weights[l] * G(l, j) * std::pow(L.radii[l] / r, 1 - m);
      }
      int out_col = ((m - 1) % N + N) % N;
      U(i, out_col) = -2.0 * K;
    }
  });
  return synthesize(L, U);
}

std::vector<cplx> cauchy_direct(const PolarLayout& L, std::span<const cplx> g) {
  check_size(L, g.size());
  const int N = L.n_theta;
  std::vector<double> w(L.size());
  std::vector<cplx> z(L.size());
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir)
    for (int it = 0; it < N; ++it) {
      w[ir * N + it] = L.area_weight(ir);
      z[ir * N + it] = L.node(ir, it);
    }
  const double a2 = L.r_min() * L.r_min();
  const double tiny = 1e-12 * L.r_max();
  std::vector<cplx> u(L.size());
  parallel_for(L.size(), [&](std::size_t i) {
    cplx zc = z[i] - L.center;
    // transform of the indicator function of the annulus
    cplx ind = std::conj(zc) - (a2 > 0 ? a2 / zc : cplx(0));
    u[i] = -simd::cauchy_sum(w, z, g, z[i], g[i], tiny) / pi + g[i] * ind;
  });
  return u;
}

std::vector<cplx> ring_coefficients(const PolarLayout& L, std::span<const cplx> f, std::size_t ir,
                                    int m_lo, int m_hi) {
  check_size(L, f.size());
  const int N = L.n_theta;
  require(ir < L.n_radial(), ErrorKind::Contract, "ring index out of range");
  require(m_lo <= m_hi && m_hi < (N + 1) / 2 && -m_lo < (N + 1) / 2, ErrorKind::Contract,
          "requested modes exceed ring resolution");
  double r = L.radii[ir];
  std::vector<cplx> c;
  for (int m = m_lo; m <= m_hi; ++m) {
    cplx s = 0;
    for (int it = 0; it < N; ++it) s += f[ir * N + it] * std::polar(1.0, -2 * pi * m * it / N);
    c.push_back(s / double(N) / std::pow(r, m));
  }
  return c;
}

std::size_t nearest_ring(const PolarLayout& L, double r) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < L.n_radial(); ++i)
    if (std::abs(L.radii[i] - r) < std::abs(L.radii[best] - r)) best = i;
  return best;
}

cplx interpolate(const PolarLayout& L, std::span<const cplx> f, cplx z) {
  check_size(L, f.size());
  const int N = L.n_theta, q = L.nodes_per_panel;
  cplx zc = z - L.center;
  double r = std::abs(zc), th = std::arg(zc);
  int p = 0;
  while (p + 1 < L.panel_count() && r > L.breaks[p + 1]) ++p;
  auto xs = panel_radii(L, p);
  Eigen::MatrixXd P = interp_matrix(xs, bary_weights(xs), {r});
  std::vector<cplx> ring(N, 0.0);
  for (int it = 0; it < N; ++it)
    for (int j = 0; j < q; ++j) ring[it] += P(0, j) * f[(static_cast<std::size_t>(p) * q + j) * N + it];
  cplx s = 0;
  for (int j = 0; j < N; ++j) {
    int m = mode_of(j, N);
    cplx c = 0;
    for (int it = 0; it < N; ++it) c += ring[it] * std::polar(1.0, -2 * pi * m * it / N);
    s += c / double(N) * std::polar(1.0, m * th);
  }
  return s;
}

}  // namespace jetex::polar
