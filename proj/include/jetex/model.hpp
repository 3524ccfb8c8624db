#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace jetex {

using cplx = std::complex<double>;

enum class DomainKind { Disc, Annulus, Ball2, Polydisc };

struct ModelDomain {
  DomainKind kind = DomainKind::Disc;
  std::array<cplx, 2> center{};
  int ambient_dim = 1;
  double radius = 1.0;  // disc, ball2
  double r_in = 0.0;    // annulus
  double r_out = 1.0;   // annulus
  std::array<double, 2> radii{1.0, 1.0};  // polydisc, (z1, z2)

  static ModelDomain disc(double radius, cplx center = {});
  static ModelDomain annulus(double r_in, double r_out, cplx center = {});
  static ModelDomain ball2(double radius);
  static ModelDomain polydisc(double r1, double r2);

  double diameter() const;
  /// Radius of the disc swept by the first coordinate.
  double outer_radius() const;
  void validate() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Polar tensor layout: composite Gauss-Legendre panels in r, trapezoid in
/// theta. Node (ir, it) sits at center + radii[ir] * exp(2 pi i it / n_theta),
/// flat index ir * n_theta + it.
struct PolarLayout {
  cplx center{};
  std::vector<double> breaks;
  int nodes_per_panel = 0;
  int n_theta = 0;
  std::vector<double> radii;
  std::vector<double> radial_weights;  // GL weights on [a, b], no Jacobian

  std::size_t n_radial() const { return radii.size(); }
  std::size_t size() const { return radii.size() * static_cast<std::size_t>(n_theta); }
  double r_min() const { return breaks.front(); }
  double r_max() const { return breaks.back(); }
  int panel_count() const { return static_cast<int>(breaks.size()) - 1; }
  double area_weight(std::size_t ir) const;
  cplx node(std::size_t ir, std::size_t it) const;
};

struct LayoutOptions {
  /// Largest ratio b/a allowed for a panel [a, b] with a > 0.
  double grading = 2.0;
  /// Nodes per panel; 0 picks resolution (single panel) or resolution/2.
  int panel_nodes = 0;
  /// Additional radial breakpoints (kinks of cutoffs, say).
  std::vector<double> extra_breaks;
};

PolarLayout make_polar_layout(cplx center, double r_in, double r_out, int n_radial, int n_theta,
                              const LayoutOptions& opts = {});

/// One z1-slice of a grid: for n = 1 there is a single fiber with weight2 = 1.
struct Fiber {
  cplx z2{};
  double weight2 = 1.0;
  PolarLayout layout;
  std::size_t offset = 0;
};

struct QuadGrid {
  int dim = 1;
  std::vector<cplx> z1;
  std::vector<cplx> z2;  // empty when dim == 1
  std::vector<double> weights;
  std::vector<int> resolution;
  double excision_radius = 0.0;
  std::vector<Fiber> fibers;

  std::size_t size() const { return weights.size(); }
  double volume() const;
};

/// resolution holds (n_radial, n_theta) for each complex dimension, z1 first.
/// The excised set is |z1 - c1| < excision_radius.
QuadGrid make_grid(const ModelDomain& domain, std::span<const int> resolution,
                   double excision_radius, const LayoutOptions& opts = {});
QuadGrid make_grid(const ModelDomain& domain, std::initializer_list<int> resolution,
                   double excision_radius, const LayoutOptions& opts = {});

/// Grid of one planar layout (n = 1).
QuadGrid grid_from_layout(const PolarLayout& layout);

/// Zero-dimensional grid: evaluation at a point (counting measure).
QuadGrid point_grid(cplx z);

/// Volume of domain minus the excised tube, in closed form.
double excised_volume(const ModelDomain& domain, double excision_radius);

double integrate(const QuadGrid& grid, std::span<const double> samples);
cplx integrate(const QuadGrid& grid, std::span<const cplx> samples);

void write_grid_csv(const QuadGrid& grid, std::ostream& os);

struct MultiIndex {
  std::vector<int> entries;
  int order() const;
  /// alpha! = prod entries_i!
  double factorial() const;
  auto operator<=>(const MultiIndex&) const = default;
};

/// All alpha in N^r with |alpha| <= k, lexicographic.
std::vector<MultiIndex> multiindices_upto(int r, int k);

double factorial(int n);
double binomial(int n, int k);

}  // namespace jetex
