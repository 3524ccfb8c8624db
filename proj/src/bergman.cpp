#include "jetex/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jetex/error.hpp"
#include "jetex/linalg.hpp"
#include "jetex/parallel.hpp"
#include "jetex/simd.hpp"

namespace jetex {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::numbers::pi;

std::vector<double> WeightField::density(const QuadGrid& grid) const {
  require(phi.empty() || phi.size() == grid.size(), ErrorKind::Contract, "phi not aligned with grid");
  if (singular_exponent >= 1)
    require(grid.excision_radius > 0, ErrorKind::Precondition, "singular weight needs an excised grid");
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = phi.empty() ? 1.0 : std::exp(-phi[i]);
    if (singular_exponent > 0 || log_factor) {
      double s = s_scale * std::abs(grid.z1[i] - center);
      require(s > 0, ErrorKind::Precondition, "singular weight evaluated on Y");
      if (singular_exponent > 0) v *= std::pow(s, -2 * singular_exponent);
      if (log_factor) {
        require(s < 1, ErrorKind::Precondition, "log factor needs |s| < 1");
        double l = std::log(s);
        v /= l * l;
      }
    }
    d[i] = v;
  }
  return d;
}

std::vector<double> sample_phi(const QuadGrid& grid, const PhiFn& phi) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = phi(grid.z1[i], grid.dim == 2 ? grid.z2[i] : cplx(0));
  return out;
}

BasisSpec BasisSpec::upto(int dim, int max_degree, std::array<cplx, 2> origin) {
  require(dim == 1 || dim == 2, ErrorKind::Contract, "basis dimension must be 1 or 2");
  BasisSpec b;
  b.dim = dim;
  b.max_degree = max_degree;
  b.origin = origin;
  b.monomials = multiindices_upto(dim, max_degree);
  return b;
}

std::size_t BasisSpec::index_of(const MultiIndex& a) const {
  auto it = std::lower_bound(monomials.begin(), monomials.end(), a);
  require(it != monomials.end() && *it == a, ErrorKind::Infeasible, "monomial not in basis");
  return static_cast<std::size_t>(it - monomials.begin());
}

cplx BasisSpec::eval(std::size_t i, cplx z1, cplx z2) const {
  const auto& e = monomials[i].entries;
  cplx v = std::pow(z1 - origin[0], e[0]);
  if (dim == 2) v *= std::pow(z2 - origin[1], e[1]);
  return v;
}

cplx BasisSpec::eval_sum(const VectorXcd& c, cplx z1, cplx z2) const {
  cplx s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += c[static_cast<long>(i)] * eval(i, z1, z2);
  return s;
}

MatrixXcd basis_samples(const QuadGrid& grid, const BasisSpec& basis) {
  require(grid.dim == basis.dim, ErrorKind::Contract, "basis and grid dimensions differ");
  MatrixXcd B(grid.size(), basis.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx z2 = grid.dim == 2 ? grid.z2[i] : cplx(0);
    for (std::size_t a = 0; a < basis.size(); ++a) B(i, a) = basis.eval(a, grid.z1[i], z2);
  }
  return B;
}

std::vector<cplx> evaluate(const QuadGrid& grid, const BasisSpec& basis, const VectorXcd& c) {
  VectorXcd v = basis_samples(grid, basis) * c;
  return {v.data(), v.data() + v.size()};
}

namespace {

std::vector<double> combined_weights(const QuadGrid& grid, std::span<const double> density) {
  require(density.size() == grid.size(), ErrorKind::Contract, "density not aligned with grid");
  std::vector<double> cw(grid.size());
  for (std::size_t i = 0; i < cw.size(); ++i) cw[i] = grid.weights[i] * density[i];
  return cw;
}

std::span<const cplx> col(const MatrixXcd& B, Eigen::Index j) {
  return {B.col(j).data(), static_cast<std::size_t>(B.rows())};
}

}  // namespace

GramData gram_matrix(const QuadGrid& grid, std::span<const double> density, const BasisSpec& basis) {
  auto cw = combined_weights(grid, density);
  MatrixXcd B = basis_samples(grid, basis);
  const auto n = static_cast<Eigen::Index>(basis.size());
  GramData out;
  out.G = MatrixXcd::Zero(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t a) {
    auto ia = static_cast<Eigen::Index>(a);
    for (Eigen::Index b = ia; b < n; ++b) out.G(ia, b) = simd::weighted_cdot(cw, col(B, ia), col(B, b));
  });
  for (Eigen::Index a = 0; a < n; ++a) {
    out.G(a, a) = out.G(a, a).real();
    for (Eigen::Index b = a + 1; b < n; ++b) out.G(b, a) = std::conj(out.G(a, b));
  }
  out.condition = linalg::condition_number(out.G);
  require(out.condition <= 1e12, ErrorKind::IllConditioned, "Gram matrix condition number exceeds 1e12");
  return out;
}

JetConstraints point_jet_constraints(const BasisSpec& basis, const JetData& jet, cplx z0) {
  require(basis.dim == 1 && jet.r == 1 && jet.n_nodes() == 1, ErrorKind::Contract,
          "point constraints need a planar basis and a point jet");
  require(jet.k <= basis.max_degree, ErrorKind::Infeasible, "basis degree below jet order");
  JetConstraints c;
  c.C = MatrixXcd::Zero(jet.k + 1, static_cast<Eigen::Index>(basis.size()));
  c.d = VectorXcd::Zero(jet.k + 1);
  cplx h = z0 - basis.origin[0];
  for (int m = 0; m <= jet.k; ++m) {
    for (int j = m; j <= basis.max_degree; ++j) c.C(m, j) = binomial(j, m) * std::pow(h, j - m);
    c.d[m] = jet.values[jet.index_of(MultiIndex{{m}})][0];
  }
  return c;
}

JetConstraints hyperplane_jet_constraints(const BasisSpec& basis, int k,
                                          const std::vector<std::vector<cplx>>& coeff_polys) {
  require(basis.dim == 2, ErrorKind::Contract, "hyperplane constraints need a 2-D basis");
  require(static_cast<int>(coeff_polys.size()) == k + 1, ErrorKind::Contract, "one polynomial per jet order");
  std::vector<std::pair<std::size_t, cplx>> rows;
  for (int m = 0; m <= k; ++m) {
    int top = basis.max_degree - m;
    require(top >= 0, ErrorKind::Infeasible, "basis degree below jet order");
    for (std::size_t b = static_cast<std::size_t>(top) + 1; b < coeff_polys[m].size(); ++b)
      require(coeff_polys[m][b] == cplx(0), ErrorKind::Infeasible, "jet coefficient degree exceeds basis");
    for (int b = 0; b <= top; ++b) {
      cplx v = static_cast<std::size_t>(b) < coeff_polys[m].size() ? coeff_polys[m][b] : cplx(0);
      rows.emplace_back(basis.index_of(MultiIndex{{m, b}}), v);
    }
  }
  JetConstraints c;
  c.C = MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(basis.size()));
  c.d = VectorXcd::Zero(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    c.C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rows[i].first)) = 1;
    c.d[static_cast<Eigen::Index>(i)] = rows[i].second;
  }
  return c;
}

Extension minimal_jet_extension(const QuadGrid& grid, std::span<const double> density, const BasisSpec& basis,
                                const JetConstraints& cons) {
  auto g = gram_matrix(grid, density, basis);
  auto sol = linalg::kkt_minimize(g.G, cons.C, cons.d);
  return {sol.x, sol.objective, g.condition};
}

Extension minimal_jet_extension_dense(const QuadGrid& grid, std::span<const double> density,
                                      const BasisSpec& basis, const JetConstraints& cons) {
  auto cw = combined_weights(grid, density);
  Eigen::Map<const Eigen::VectorXd> w(cw.data(), static_cast<Eigen::Index>(cw.size()));
  auto sol = linalg::lsq_minimize(basis_samples(grid, basis), w, cons.C, cons.d);
  return {sol.x, sol.objective, 0};
}

VectorXcd bergman_projection(const QuadGrid& grid, std::span<const double> density, const BasisSpec& basis,
                             std::span<const cplx> f) {
  require(f.size() == grid.size(), ErrorKind::Contract, "samples not aligned with grid");
  auto g = gram_matrix(grid, density, basis);
  auto cw = combined_weights(grid, density);
  MatrixXcd B = basis_samples(grid, basis);
  VectorXcd rhs(B.cols());
  for (Eigen::Index a = 0; a < B.cols(); ++a) rhs[a] = simd::weighted_cdot(cw, col(B, a), f);
  return g.G.ldlt().solve(rhs);
}

CorollaryReport verify_corollary_bound(const ModelDomain& disc, const std::vector<cplx>& derivs,
                                       const PhiFn& phi, double eps, int resolution, int basis_degree) {
  require(disc.kind == DomainKind::Disc, ErrorKind::UnsupportedGeometry, "corollary check runs on a disc");
  const int n = 1;
  require(eps > 0 && eps <= n, ErrorKind::NonIntegrable, "epsilon must lie in (0, n]");
  require(!derivs.empty(), ErrorKind::Contract, "empty jet");
  const int k = static_cast<int>(derivs.size()) - 1;
  const cplx z0 = disc.center[0];
  auto grid = make_grid(disc, {resolution, 2 * resolution}, 0.0);
  WeightField wf;
  wf.phi = sample_phi(grid, phi);
  wf.singular_exponent = n - eps;
  wf.center = z0;
  auto dens = wf.density(grid);
  auto basis = BasisSpec::upto(1, basis_degree, {z0, 0.0});
  std::vector<cplx> taylor(derivs.size());
  double data = 0;
  for (int j = 0; j <= k; ++j) {
    taylor[j] = derivs[j] / factorial(j);
    data += std::norm(derivs[j]);
  }
  auto cons = point_jet_constraints(basis, JetData::point(1, k, taylor), z0);
  auto gram = gram_matrix(grid, dens, basis);
  auto sol = linalg::kkt_minimize(gram.G, cons.C, cons.d);

  CorollaryReport rep;
  const double phi0 = phi(z0, 0.0), diam = disc.diameter();
  const double frame = std::exp(-phi0) / (eps * eps * std::pow(diam, 2.0 * (n - eps)));
  rep.lhs = sol.objective;
  rep.rhs_frame = data * frame;
  rep.ratio = data > 0 ? rep.lhs / rep.rhs_frame : 0.0;
  rep.basis_degree = basis_degree;
  rep.grid_resolution = grid.resolution;
  rep.coeffs = sol.x;
  // minimal norm is d^H S^-1 d with S = C G^-1 C^H and d = D a, D = diag(1/j!)
  MatrixXcd GiCh = linalg::hermitize(gram.G).llt().solve(cons.C.adjoint());
  MatrixXcd S = linalg::hermitize(cons.C * GiCh);
  MatrixXcd Dm = MatrixXcd::Zero(k + 1, k + 1);
  for (int j = 0; j <= k; ++j) Dm(j, j) = 1 / factorial(j);
  MatrixXcd Q = linalg::hermitize(Dm * S.inverse() * Dm);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Q, Eigen::EigenvaluesOnly);
  rep.c_star = es.eigenvalues().maxCoeff() / frame;
  return rep;
}

ParsevalReport parseval_check(const std::vector<cplx>& coeffs, double rho) {
  require(rho > 0, ErrorKind::Contract, "rho must be positive");
  int deg = std::max<int>(1, static_cast<int>(coeffs.size()) - 1);
  int nr = std::max(4, deg + 2), nt = std::max(8, 2 * deg + 4);
  auto grid = make_grid(ModelDomain::disc(rho), {nr, nt}, 0.0);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx v = 0;
    for (std::size_t m = coeffs.size(); m-- > 0;) v = v * grid.z1[i] + coeffs[m];
    f[i] = std::norm(v);
  }
  ParsevalReport rep;
  rep.lhs = integrate(grid, std::span<const double>(f));
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    rep.rhs += pi * std::norm(coeffs[m]) * std::pow(rho, 2.0 * m + 2) / (m + 1.0);
  rep.residual = std::abs(rep.lhs - rep.rhs) / std::max(1e-300, std::abs(rep.rhs));
  if (rep.rhs == 0) rep.residual = std::abs(rep.lhs);
  return rep;
}

DerivativeControl derivative_control(const QuadGrid& grid, std::span<const cplx> F, std::span<const double> phi,
                                     int k) {
  require(grid.dim == 1 && grid.fibers.size() == 1, ErrorKind::UnsupportedGeometry, "derivative control on a disc");
  auto jet = transversal_jet(grid, F, FlatSetup::PointInDisc, k);
  WeightField wf;
  wf.phi.assign(phi.begin(), phi.end());
  auto dens = wf.density(grid);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = std::norm(F[i]) * dens[i];
  DerivativeControl out;
  out.norm2 = integrate(grid, std::span<const double>(f));
  require(out.norm2 > 0, ErrorKind::Contract, "F vanishes identically");
  double num = 0;
  for (int j = 0; j <= k; ++j) num += jet.order_norm2(j, 0);
  out.gamma = num / out.norm2;
  double sup_phi = phi.empty() ? 0.0 : *std::max_element(phi.begin(), phi.end());
  double R = grid.fibers[0].layout.r_max(), worst = 0;
  for (int j = 0; j <= k; ++j) worst = std::max(worst, (j + 1) / (pi * std::pow(R, 2.0 * j + 2)));
  out.bound = std::exp(sup_phi) * worst;
  return out;
}

}  // namespace jetex
