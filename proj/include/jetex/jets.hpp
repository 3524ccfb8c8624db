#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "jetex/model.hpp"

namespace jetex {

/// Transversal jet given by Taylor coefficients a_alpha (|alpha| <= k) in the
/// normal coordinates, one sample per Y-node.
struct JetData {
  int r = 1;
  int k = 0;
  std::vector<MultiIndex> alphas;          // multiindices_upto(r, k)
  std::vector<std::vector<cplx>> values;   // values[alpha][node]

  static JetData zeros(int r, int k, std::size_t n_nodes);
  /// Point jet from coefficients listed in multiindices_upto order.
  static JetData point(int r, int k, const std::vector<cplx>& coeffs);

  std::size_t n_nodes() const { return values.empty() ? 0 : values.front().size(); }
  std::size_t index_of(const MultiIndex& a) const;
  void validate() const;
};

/// Defining section data: Ds per Y-node (r x n), bounds over the ambient domain.
struct SectionData {
  int r = 1;
  int n = 1;
  std::vector<Eigen::MatrixXcd> Ds;  // per Y-node
  double Ds_sup = 0;                 // sup over domain of ||Ds||
  double D2s_sup = 0;                // sup over domain of ||D^2 s||
  std::vector<double> lambda_r_ds;   // per Y-node

  /// s(z) = c (z - z0) restricted to the first r coordinates, flat metric.
  static SectionData linear(int r, int n, double c, std::size_t n_nodes);
};

/// Derivative jet: orders[j][a][node] = d^alpha f for the a-th alpha of order j.
struct NablaJet {
  int r = 1;
  int k = 0;
  std::vector<std::vector<MultiIndex>> alphas;            // per order
  std::vector<std::vector<std::vector<cplx>>> orders;     // [j][alpha][node]

  std::size_t n_nodes() const;
  /// Squared tensor norm of order j at a node, sum over |alpha| = j of |d^alpha f / alpha!|^2.
  double order_norm2(int j, std::size_t node) const;
};

NablaJet to_nabla(const JetData& jet);
JetData to_jet(const NablaJet& nab);

/// |Lambda^r ds| = sqrt(det(Ds Ds^H)).
double lambda_r(const Eigen::MatrixXcd& Ds);
/// Spectral norm of the pseudo-inverse of Ds (1 / smallest singular value).
double inverse_norm(const Eigen::MatrixXcd& Ds);

double rho_weight(const SectionData& s, std::size_t y);

double pointwise_jet_norm(const NablaJet& jet, const SectionData& s, double rho, std::size_t y);
double pointwise_jet_norm(const JetData& jet, const SectionData& s, double rho, std::size_t y);

/// Integral over Y of the pointwise norm times |Lambda^r ds|^-2 e^-phi. phi may be empty.
double l2_jet_norm(const JetData& jet, const SectionData& s, std::span<const double> rho,
                   std::span<const double> phi, const QuadGrid& y_grid);

/// Ratio of the L2 jet norm at a point jet to sum |a_alpha|^2 e^-phi, per order.
/// For s = c (z - z0) this is c^-2(r+j) with our coefficient convention.
std::vector<double> point_norm_constants(int r, int k, double c);

enum class FlatSetup { PointInDisc, HyperplaneInPolydisc };

/// Transversal derivatives of a holomorphic lift sampled on an unexcised grid
/// centred on Y. Taylor coefficients are read from ring Fourier modes; the
/// lift is rejected if two rings disagree (not holomorphic in the normal
/// direction).
NablaJet transversal_jet(const QuadGrid& grid, std::span<const cplx> lift, FlatSetup setup, int k,
                         double* holomorphy_residual = nullptr);

std::string jet_to_json(const JetData& jet);
JetData jet_from_json(const std::string& text);

}  // namespace jetex
