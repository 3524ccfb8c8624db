#include "jetex/jets.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "jetex/error.hpp"
#include "jetex/polar.hpp"

namespace jetex {

JetData JetData::zeros(int r, int k, std::size_t n_nodes) {
  JetData j;
  j.r = r;
  j.k = k;
  j.alphas = multiindices_upto(r, k);
  j.values.assign(j.alphas.size(), std::vector<cplx>(n_nodes, 0.0));
  return j;
}

JetData JetData::point(int r, int k, const std::vector<cplx>& coeffs) {
  JetData j = zeros(r, k, 1);
  require(coeffs.size() == j.alphas.size(), ErrorKind::Contract, "point jet: wrong coefficient count");
  for (std::size_t a = 0; a < coeffs.size(); ++a) j.values[a][0] = coeffs[a];
  return j;
}

std::size_t JetData::index_of(const MultiIndex& a) const {
  auto it = std::lower_bound(alphas.begin(), alphas.end(), a);
  require(it != alphas.end() && *it == a, ErrorKind::Contract, "multi-index not in jet");
  return static_cast<std::size_t>(it - alphas.begin());
}

void JetData::validate() const {
  require(r >= 1 && k >= 0, ErrorKind::Contract, "jet needs r >= 1, k >= 0");
  require(alphas == multiindices_upto(r, k), ErrorKind::Contract, "jet must list every |alpha| <= k");
  require(values.size() == alphas.size(), ErrorKind::Contract, "jet values per multi-index missing");
  for (auto& v : values) require(v.size() == n_nodes(), ErrorKind::Contract, "jet samples not aligned");
}

SectionData SectionData::linear(int r, int n, double c, std::size_t n_nodes) {
  require(r >= 1 && r <= n, ErrorKind::Contract, "section needs 1 <= r <= n");
  SectionData s;
  s.r = r;
  s.n = n;
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(r, n);
  for (int i = 0; i < r; ++i) D(i, i) = c;
  s.Ds.assign(n_nodes, D);
  s.Ds_sup = std::abs(c);
  s.D2s_sup = 0;
  s.lambda_r_ds.assign(n_nodes, lambda_r(D));
  return s;
}

std::size_t NablaJet::n_nodes() const {
  return orders.empty() || orders[0].empty() ? 0 : orders[0][0].size();
}

double NablaJet::order_norm2(int j, std::size_t node) const {
  double s = 0;
  for (std::size_t a = 0; a < alphas[j].size(); ++a)
    s += std::norm(orders[j][a][node] / alphas[j][a].factorial());
  return s;
}

NablaJet to_nabla(const JetData& jet) {
  jet.validate();
  NablaJet nj;
  nj.r = jet.r;
  nj.k = jet.k;
  nj.alphas.resize(jet.k + 1);
  nj.orders.resize(jet.k + 1);
  for (std::size_t a = 0; a < jet.alphas.size(); ++a) {
    int j = jet.alphas[a].order();
    double f = jet.alphas[a].factorial();
    std::vector<cplx> v(jet.values[a]);
    for (auto& x : v) x *= f;
    nj.alphas[j].push_back(jet.alphas[a]);
    nj.orders[j].push_back(std::move(v));
  }
  return nj;
}

JetData to_jet(const NablaJet& nab) {
  JetData jet = JetData::zeros(nab.r, nab.k, nab.n_nodes());
  for (int j = 0; j <= nab.k; ++j)
    for (std::size_t a = 0; a < nab.alphas[j].size(); ++a) {
      auto idx = jet.index_of(nab.alphas[j][a]);
      double f = nab.alphas[j][a].factorial();
      for (std::size_t y = 0; y < jet.n_nodes(); ++y) jet.values[idx][y] = nab.orders[j][a][y] / f;
    }
  return jet;
}

double lambda_r(const Eigen::MatrixXcd& Ds) {
  Eigen::MatrixXcd M = Ds * Ds.adjoint();
  return std::sqrt(std::max(0.0, M.determinant().real()));
}

double inverse_norm(const Eigen::MatrixXcd& Ds) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ds);
  auto sv = svd.singularValues();
  double smin = sv.minCoeff(), smax = sv.maxCoeff();
  require(smax > 0 && smin > 1e-14 * smax, ErrorKind::DegenerateSection, "Ds is singular on the normal directions");
  return 1 / smin;
}

double rho_weight(const SectionData& s, std::size_t y) {
  require(y < s.Ds.size(), ErrorKind::Contract, "rho_weight: Y-node out of range");
  double inv = inverse_norm(s.Ds[y]);
  double sup = s.D2s_sup + s.Ds_sup;
  require(sup > 0, ErrorKind::DegenerateSection, "section has vanishing derivatives");
  return 1 / (inv * sup);
}

namespace {

template <class OrderNorm>
double pointwise(int r, int k, const SectionData& s, double rho, std::size_t y, OrderNorm order_norm) {
  require(rho > 0, ErrorKind::Contract, "rho must be positive");
  require(y < s.lambda_r_ds.size(), ErrorKind::Contract, "Y-node out of range");
  double lam = s.lambda_r_ds[y];
  require(lam > 0, ErrorKind::Division, "|Lambda^r ds| vanishes");
  double total = order_norm(0);
  for (int j = 1; j <= k; ++j)
    total += order_norm(j) / (std::pow(lam, 2.0 * j / r) * std::pow(rho, 2.0 * (r + j)));
  return total;
}

}  // namespace

double pointwise_jet_norm(const NablaJet& jet, const SectionData& s, double rho, std::size_t y) {
  return pointwise(jet.r, jet.k, s, rho, y, [&](int j) { return jet.order_norm2(j, y); });
}

double pointwise_jet_norm(const JetData& jet, const SectionData& s, double rho, std::size_t y) {
  return pointwise(jet.r, jet.k, s, rho, y, [&](int j) {
    double t = 0;
    for (std::size_t a = 0; a < jet.alphas.size(); ++a)
      if (jet.alphas[a].order() == j) t += std::norm(jet.values[a][y]);
    return t;
  });
}

double l2_jet_norm(const JetData& jet, const SectionData& s, std::span<const double> rho,
                   std::span<const double> phi, const QuadGrid& y_grid) {
  const std::size_t ny = y_grid.size();
  require(jet.n_nodes() == ny && rho.size() == ny && s.lambda_r_ds.size() == ny, ErrorKind::Contract,
          "l2_jet_norm: Y-grid alignment");
  require(phi.empty() || phi.size() == ny, ErrorKind::Contract, "l2_jet_norm: phi alignment");
  std::vector<double> f(ny);
  for (std::size_t y = 0; y < ny; ++y) {
    double lam = s.lambda_r_ds[y];
    f[y] = pointwise_jet_norm(jet, s, rho[y], y) / (lam * lam) * (phi.empty() ? 1.0 : std::exp(-phi[y]));
  }
  return integrate(y_grid, std::span<const double>(f));
}

std::vector<double> point_norm_constants(int r, int k, double c) {
  std::vector<double> out;
  for (int j = 0; j <= k; ++j) out.push_back(std::pow(c, -2.0 * (r + j)));
  return out;
}

NablaJet transversal_jet(const QuadGrid& grid, std::span<const cplx> lift, FlatSetup setup, int k,
                         double* holomorphy_residual) {
  require(lift.size() == grid.size(), ErrorKind::Contract, "lift not aligned with grid");
  require(k >= 0, ErrorKind::Contract, "k must be nonnegative");
  const bool point = setup == FlatSetup::PointInDisc;
  require(point ? grid.dim == 1 : grid.dim == 2, ErrorKind::UnsupportedGeometry, "grid does not match flat setup");
  require(!grid.fibers.empty(), ErrorKind::UnsupportedGeometry, "grid has no polar structure");
  NablaJet out;
  out.r = 1;
  out.k = k;
  out.alphas.resize(k + 1);
  out.orders.resize(k + 1);
  for (int j = 0; j <= k; ++j) {
    out.alphas[j] = {MultiIndex{{j}}};
    out.orders[j] = {std::vector<cplx>(grid.fibers.size())};
  }
  double resid = 0;
  for (std::size_t f = 0; f < grid.fibers.size(); ++f) {
    const auto& fib = grid.fibers[f];
    const auto& L = fib.layout;
    require(L.r_min() == 0 && L.center == cplx(0), ErrorKind::UnsupportedGeometry,
            "transversal jets need an unexcised grid centred on Y");
    require(k < L.n_theta / 2 - 1, ErrorKind::Contract, "jet order exceeds angular resolution");
    auto f_span = lift.subspan(fib.offset, L.size());
    std::size_t i1 = polar::nearest_ring(L, 0.5 * L.r_max()), i2 = polar::nearest_ring(L, 0.85 * L.r_max());
    int mneg = std::min(k + 2, L.n_theta / 2 - 1);
    auto c1 = polar::ring_coefficients(L, f_span, i1, -mneg, k);
    auto c2 = polar::ring_coefficients(L, f_span, i2, -mneg, k);
    double scale = 1;
    for (auto v : f_span) scale = std::max(scale, std::abs(v));
    for (int m = -mneg; m < 0; ++m) {
      std::size_t idx = static_cast<std::size_t>(m + mneg);
      resid = std::max(resid, std::abs(c1[idx]) * std::pow(L.radii[i1], m) / scale);
    }
    for (int m = 0; m <= k; ++m) {
      std::size_t idx = static_cast<std::size_t>(m + mneg);
      resid = std::max(resid, std::abs(c1[idx] - c2[idx]) * std::pow(L.r_max(), m) / scale);
      out.orders[m][0][f] = c1[idx] * factorial(m);
    }
  }
  if (holomorphy_residual) *holomorphy_residual = resid;
  require(resid < 1e-8, ErrorKind::NotHolomorphic, "lift is not holomorphic in the normal direction");
  return out;
}

std::string jet_to_json(const JetData& jet) {
  jet.validate();
  nlohmann::ordered_json j;
  j["r"] = jet.r;
  j["k"] = jet.k;
  j["coeffs"] = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < jet.alphas.size(); ++a) {
    nlohmann::ordered_json c;
    c["alpha"] = jet.alphas[a].entries;
    c["values"] = nlohmann::ordered_json::array();
    for (auto v : jet.values[a]) c["values"].push_back({v.real(), v.imag()});
    j["coeffs"].push_back(c);
  }
  return j.dump(2);
}

JetData jet_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Schema, std::string("jet JSON: ") + e.what());
  }
  try {
    JetData jet = JetData::zeros(j.at("r").get<int>(), j.at("k").get<int>(), 0);
    const auto& coeffs = j.at("coeffs");
    require(coeffs.is_array() && coeffs.size() == jet.alphas.size(), ErrorKind::Schema,
            "jet JSON: coeffs must list every |alpha| <= k");
    std::size_t nodes = coeffs.at(0).at("values").size();
    for (auto& v : jet.values) v.assign(nodes, 0.0);
    for (const auto& c : coeffs) {
      MultiIndex a{c.at("alpha").get<std::vector<int>>()};
      require(static_cast<int>(a.entries.size()) == jet.r, ErrorKind::Schema, "jet JSON: alpha length != r");
      std::size_t idx = jet.index_of(a);
      const auto& vals = c.at("values");
      require(vals.size() == nodes, ErrorKind::Schema, "jet JSON: ragged values");
      for (std::size_t y = 0; y < nodes; ++y)
        jet.values[idx][y] = {vals.at(y).at(0).get<double>(), vals.at(y).at(1).get<double>()};
    }
    jet.validate();
    return jet;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Schema, std::string("jet JSON: ") + e.what());
  }
}

}  // namespace jetex
