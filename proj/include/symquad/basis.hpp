#pragma once

#include <array>
#include <compare>
#include <span>
#include <vector>

#include "symquad/domain.hpp"
#include "symquad/linalg.hpp"

namespace symquad {

/// Degrees (i, j, k) of one orthonormal basis function; k = 0 in 2D.
struct BasisIndex {
  std::array<int, 3> degrees{};

  int total() const { return degrees[0] + degrees[1] + degrees[2]; }
  bool is_constant() const { return total() == 0; }
  auto operator<=>(const BasisIndex&) const = default;
};

struct ObjectiveBasis {
  DomainKind kind{};
  int strength = 0;
  std::vector<BasisIndex> indices;
};

/// Orthonormal Jacobi polynomial on [-1, 1] with weight (1-x)^a (1+x)^b.
template <class Real> Real jacobi_normalized(int n, int a, int b, Real x);

/// Every basis function of total degree <= phi, lexicographic in (i, j, k).
std::vector<BasisIndex> full_indices(DomainKind kind, int phi);

/// The subset of full_indices that symmetric rules must match explicitly.
ObjectiveBasis objective_indices(DomainKind kind, int phi);

/// Exact integral of a basis function: sqrt(volume) for the constant mode,
/// zero for everything else.
template <class Real> Real basis_integral(const Domain& d, const BasisIndex& index) {
  using std::sqrt;
  return index.is_constant() ? Real(sqrt(Real(d.volume))) : Real(0);
}

/// Points in structure-of-arrays form, grouped into contiguous segments
/// (one segment per orbit instance when assembling residuals).
template <class Real> struct PointSet {
  std::vector<Real> x, y, z;
  std::vector<std::size_t> offsets{0};

  std::size_t size() const { return x.size(); }
  std::size_t segments() const { return offsets.size() - 1; }

  void push(const PointT<Real>& p) {
    x.push_back(p[0]);
    y.push_back(p[1]);
    z.push_back(p[2]);
  }
  void close_segment() { offsets.push_back(x.size()); }
  void clear() {
    x.clear();
    y.clear();
    z.clear();
    offsets.assign(1, 0);
  }
};

/// Entry (r, j) is the sum of basis function indices[r] over segment j.
template <class Real>
Matrix<Real> orbit_sums(DomainKind kind, std::span<const BasisIndex> indices, const PointSet<Real>& points);

/// Entry (r, p) is basis function indices[r] at point p.
template <class Real>
Matrix<Real> basis_values(DomainKind kind, std::span<const BasisIndex> indices,
                          std::span<const PointT<Real>> points);

/// Full basis of degree <= phi at one point, ordered as full_indices.
template <class Real> std::vector<Real> ortho_basis_eval(const Domain& d, int phi, const PointT<Real>& point);

extern template double jacobi_normalized(int, int, int, double);
extern template Extended jacobi_normalized(int, int, int, Extended);
extern template Matrix<double> orbit_sums(DomainKind, std::span<const BasisIndex>, const PointSet<double>&);
extern template Matrix<Extended> orbit_sums(DomainKind, std::span<const BasisIndex>,
                                            const PointSet<Extended>&);
extern template Matrix<double> basis_values(DomainKind, std::span<const BasisIndex>,
                                            std::span<const PointT<double>>);
extern template Matrix<Extended> basis_values(DomainKind, std::span<const BasisIndex>,
                                              std::span<const PointT<Extended>>);
extern template std::vector<double> ortho_basis_eval(const Domain&, int, const PointT<double>&);
extern template std::vector<Extended> ortho_basis_eval(const Domain&, int, const PointT<Extended>&);

} // namespace symquad
