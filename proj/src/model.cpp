#include "jetex/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <utility>

#include "jetex/error.hpp"
#include "jetex/simd.hpp"

namespace jetex {

using std::numbers::pi;

ModelDomain ModelDomain::disc(double radius, cplx center) {
  ModelDomain d;
  d.kind = DomainKind::Disc;
  d.radius = radius;
  d.center = {center, 0.0};
  d.validate();
  return d;
}

ModelDomain ModelDomain::annulus(double r_in, double r_out, cplx center) {
  ModelDomain d;
  d.kind = DomainKind::Annulus;
  d.r_in = r_in;
  d.r_out = r_out;
  d.center = {center, 0.0};
  d.validate();
  return d;
}

ModelDomain ModelDomain::ball2(double radius) {
  ModelDomain d;
  d.kind = DomainKind::Ball2;
  d.ambient_dim = 2;
  d.radius = radius;
  d.validate();
  return d;
}

ModelDomain ModelDomain::polydisc(double r1, double r2) {
  ModelDomain d;
  d.kind = DomainKind::Polydisc;
  d.ambient_dim = 2;
  d.radii = {r1, r2};
  d.validate();
  return d;
}

void ModelDomain::validate() const {
  switch (kind) {
    case DomainKind::Disc:
    case DomainKind::Ball2:
      require(radius > 0, ErrorKind::Contract, "radius must be positive");
      break;
    case DomainKind::Annulus:
      require(r_in > 0 && r_in < r_out, ErrorKind::Contract, "annulus needs 0 < r_in < r_out");
      break;
    case DomainKind::Polydisc:
      require(radii[0] > 0 && radii[1] > 0, ErrorKind::Contract, "polydisc radii must be positive");
      break;
  }
  int want = (kind == DomainKind::Ball2 || kind == DomainKind::Polydisc) ? 2 : 1;
  require(ambient_dim == want, ErrorKind::Contract, "ambient dimension does not match domain kind");
}

double ModelDomain::diameter() const {
  switch (kind) {
    case DomainKind::Disc:
    case DomainKind::Ball2: return 2 * radius;
    case DomainKind::Annulus: return 2 * r_out;
    case DomainKind::Polydisc: return 2 * std::hypot(radii[0], radii[1]);
  }
  return 0;
}

double ModelDomain::outer_radius() const {
  switch (kind) {
    case DomainKind::Disc:
    case DomainKind::Ball2: return radius;
    case DomainKind::Annulus: return r_out;
    case DomainKind::Polydisc: return radii[0];
  }
  return 0;
}

namespace {

// (P_n(t), P_n'(t)) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double t) {
  double p0 = 1, p1 = t;
  for (int j = 2; j <= n; ++j) {
    double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (t * p1 - p0) / (t * t - 1)};
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  require(n >= 1, ErrorKind::Contract, "gauss_legendre needs n >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre_pair(n, t);
      double dt = p / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double dp = legendre_pair(n, t).second;
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2 / ((1 - t * t) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

double PolarLayout::area_weight(std::size_t ir) const {
  return radial_weights[ir] * radii[ir] * 2 * pi / n_theta;
}

cplx PolarLayout::node(std::size_t ir, std::size_t it) const {
  return center + std::polar(radii[ir], 2 * pi * static_cast<double>(it) / n_theta);
}

PolarLayout make_polar_layout(cplx center, double r_in, double r_out, int n_radial, int n_theta,
                              const LayoutOptions& opts) {
  require(n_radial >= 4 && n_theta >= 4, ErrorKind::Contract, "resolution must be >= 4");
  require(r_in >= 0 && r_in < r_out, ErrorKind::EmptyGrid, "radial interval is empty");
  PolarLayout L;
  L.center = center;
  L.n_theta = n_theta;
  std::vector<double> br{r_in, r_out};
  for (double e : opts.extra_breaks)
    if (e > r_in * (1 + 1e-12) && e < r_out * (1 - 1e-12)) br.push_back(e);
  std::sort(br.begin(), br.end());
  if (opts.grading > 1) {
    std::vector<double> out{br.front()};
    for (std::size_t i = 1; i < br.size(); ++i) {
      double a = out.back(), b = br[i];
      if (a > 0 && b / a > opts.grading) {
        int m = static_cast<int>(std::ceil(std::log(b / a) / std::log(opts.grading) - 1e-12));
        for (int j = 1; j < m; ++j) out.push_back(a * std::pow(b / a, double(j) / m));
      }
      out.push_back(b);
    }
    br = std::move(out);
  }
  L.breaks = br;
  int panels = static_cast<int>(br.size()) - 1;
  L.nodes_per_panel = opts.panel_nodes > 0 ? opts.panel_nodes
                                           : (panels == 1 ? n_radial : std::max(4, (n_radial + 1) / 2));
  std::vector<double> gx, gw;
  gauss_legendre(L.nodes_per_panel, gx, gw);
  for (int p = 0; p < panels; ++p) {
    double a = br[p], b = br[p + 1], h = (b - a) / 2, m = (a + b) / 2;
    for (int i = 0; i < L.nodes_per_panel; ++i) {
      L.radii.push_back(m + h * gx[i]);
      L.radial_weights.push_back(h * gw[i]);
    }
  }
  return L;
}

double QuadGrid::volume() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

namespace {

void append_fiber(QuadGrid& g, cplx z2, double w2, PolarLayout layout) {
  Fiber f;
  f.z2 = z2;
  f.weight2 = w2;
  f.offset = g.weights.size();
  for (std::size_t ir = 0; ir < layout.n_radial(); ++ir) {
    double aw = layout.area_weight(ir) * w2;
    for (int it = 0; it < layout.n_theta; ++it) {
      g.z1.push_back(layout.node(ir, it));
      if (g.dim == 2) g.z2.push_back(z2);
      g.weights.push_back(aw);
    }
  }
  f.layout = std::move(layout);
  g.fibers.push_back(std::move(f));
}

}  // namespace

QuadGrid grid_from_layout(const PolarLayout& layout) {
  QuadGrid g;
  g.dim = 1;
  g.resolution = {static_cast<int>(layout.n_radial()), layout.n_theta};
  g.excision_radius = layout.r_min();
  append_fiber(g, 0.0, 1.0, layout);
  return g;
}

QuadGrid point_grid(cplx z) {
  QuadGrid g;
  g.dim = 1;
  g.z1 = {z};
  g.weights = {1.0};
  g.resolution = {1};
  return g;
}

QuadGrid make_grid(const ModelDomain& domain, std::initializer_list<int> resolution,
                   double excision_radius, const LayoutOptions& opts) {
  std::vector<int> r(resolution);
  return make_grid(domain, std::span<const int>(r), excision_radius, opts);
}

QuadGrid make_grid(const ModelDomain& domain, std::span<const int> resolution,
                   double excision_radius, const LayoutOptions& opts) {
  domain.validate();
  require(resolution.size() >= 2, ErrorKind::Contract, "resolution needs (n_radial, n_theta)");
  for (int r : resolution) require(r >= 4, ErrorKind::Contract, "resolution must be >= 4 per dimension");
  require(excision_radius >= 0, ErrorKind::Contract, "excision radius must be nonnegative");
  const double d = excision_radius;
  QuadGrid g;
  g.dim = domain.ambient_dim;
  g.resolution.assign(resolution.begin(), resolution.end());
  g.excision_radius = d;
  int nr1 = resolution[0], nt1 = resolution[1];
  int nr2 = resolution.size() >= 4 ? resolution[2] : nr1;
  int nt2 = resolution.size() >= 4 ? resolution[3] : nt1;
  if (g.dim == 2 && g.resolution.size() < 4) g.resolution = {nr1, nt1, nr2, nt2};
  switch (domain.kind) {
    case DomainKind::Disc: {
      require(d < domain.radius, ErrorKind::EmptyGrid, "excision radius >= domain radius");
      append_fiber(g, 0.0, 1.0, make_polar_layout(domain.center[0], d, domain.radius, nr1, nt1, opts));
      break;
    }
    case DomainKind::Annulus: {
      require(d < domain.r_out, ErrorKind::EmptyGrid, "excision radius >= domain radius");
      append_fiber(g, 0.0, 1.0,
                   make_polar_layout(domain.center[0], std::max(d, domain.r_in), domain.r_out, nr1, nt1, opts));
      break;
    }
    case DomainKind::Polydisc: {
      require(d < domain.radii[0], ErrorKind::EmptyGrid, "excision radius >= domain radius");
      PolarLayout inner = make_polar_layout(domain.center[0], d, domain.radii[0], nr1, nt1, opts);
      PolarLayout outer = make_polar_layout(domain.center[1], 0.0, domain.radii[1], nr2, nt2);
      for (std::size_t ir = 0; ir < outer.n_radial(); ++ir)
        for (int it = 0; it < outer.n_theta; ++it)
          append_fiber(g, outer.node(ir, it), outer.area_weight(ir), inner);
      break;
    }
    case DomainKind::Ball2: {
      const double R = domain.radius;
      require(d < R, ErrorKind::EmptyGrid, "excision radius >= domain radius");
      PolarLayout outer = make_polar_layout(domain.center[1], 0.0, std::sqrt(R * R - d * d), nr2, nt2);
      for (std::size_t ir = 0; ir < outer.n_radial(); ++ir) {
        double r2 = outer.radii[ir];
        double top = std::sqrt(R * R - r2 * r2);
        PolarLayout inner = make_polar_layout(domain.center[0], d, top, nr1, nt1, opts);
        for (int it = 0; it < outer.n_theta; ++it)
          append_fiber(g, outer.node(ir, it), outer.area_weight(ir), inner);
      }
      break;
    }
  }
  require(!g.weights.empty(), ErrorKind::EmptyGrid, "grid has no nodes");
  return g;
}

double excised_volume(const ModelDomain& domain, double d) {
  switch (domain.kind) {
    case DomainKind::Disc: return pi * (domain.radius * domain.radius - d * d);
    case DomainKind::Annulus: {
      double a = std::max(d, domain.r_in);
      return pi * (domain.r_out * domain.r_out - a * a);
    }
    case DomainKind::Polydisc:
      return pi * (domain.radii[0] * domain.radii[0] - d * d) * pi * domain.radii[1] * domain.radii[1];
    case DomainKind::Ball2: {
      double A = domain.radius * domain.radius - d * d;
      return pi * pi * A * A / 2;
    }
  }
  return 0;
}

double integrate(const QuadGrid& grid, std::span<const double> samples) {
  require(samples.size() == grid.size(), ErrorKind::Contract, "integrate: samples not aligned with nodes");
  return simd::dot(grid.weights, samples);
}

cplx integrate(const QuadGrid& grid, std::span<const cplx> samples) {
  require(samples.size() == grid.size(), ErrorKind::Contract, "integrate: samples not aligned with nodes");
  return simd::weighted_sum(grid.weights, samples);
}

void write_grid_csv(const QuadGrid& grid, std::ostream& os) {
  os << (grid.dim == 2 ? "re_z1,im_z1,re_z2,im_z2,weight\n" : "re_z1,im_z1,weight\n");
  auto old = os.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid.z1[i].real() << ',' << grid.z1[i].imag() << ',';
    if (grid.dim == 2) os << grid.z2[i].real() << ',' << grid.z2[i].imag() << ',';
    os << grid.weights[i] << '\n';
  }
  os.precision(old);
  if (!os) throw Error(ErrorKind::Io, "failed writing grid CSV");
}

int MultiIndex::order() const {
  int s = 0;
  for (int e : entries) s += e;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1;
  for (int e : entries) f *= jetex::factorial(e);
  return f;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

std::vector<MultiIndex> multiindices_upto(int r, int k) {
  require(r >= 1 && k >= 0, ErrorKind::Contract, "multiindices_upto needs r >= 1, k >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(r, 0);
  // Lexicographic odometer over the simplex |alpha| <= k.
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == r) {
      out.push_back({cur});
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
    cur[pos] = 0;
  };
  rec(rec, 0, k);
  return out;
}

}  // namespace jetex
