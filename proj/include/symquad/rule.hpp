#pragma once

#include <span>
#include <vector>

#include "symquad/domain.hpp"
#include "symquad/extended.hpp"

namespace symquad {

/// One orbit instance of a rule together with the weight shared by its
/// points. Values are stored in extended precision so refined rules keep
/// their extra digits; double-precision rules convert exactly.
struct OrbitTerm {
  int orbit_id = 0;
  std::vector<Extended> params;
  Extended weight{};
};

class QuadratureRule {
public:
  /// Validates orbit ids and parameter counts, then orders terms by orbit
  /// id (stable), which is the decomposition order used by the solver.
  QuadratureRule(DomainKind kind, int strength, std::vector<OrbitTerm> terms);

  DomainKind kind() const { return kind_; }
  const Domain& domain() const { return symquad::domain(kind_); }
  int strength() const { return strength_; }
  int point_count() const { return point_count_; }
  const std::vector<OrbitTerm>& terms() const { return terms_; }

  Decomposition decomposition() const;

  /// Orbit parameters concatenated in term order.
  template <class Real> std::vector<Real> flat_params() const;

  /// Expanded points, one orbit after another.
  template <class Real> std::vector<PointT<Real>> points() const;
  /// Per-point weights aligned with points().
  template <class Real> std::vector<Real> point_weights() const;

private:
  DomainKind kind_;
  int strength_;
  int point_count_ = 0;
  std::vector<OrbitTerm> terms_;
};

struct RuleQuality {
  double xi = 0.0;      ///< xi(phi)
  double xi_next = 0.0; ///< xi(phi + 1)
  bool is_pi = false;
  double min_weight = 0.0;
  double min_boundary_distance = 0.0;
};

/// Root-sum-square error of the rule on the objective basis of degree
/// phi_prime, with the constant mode compared against sqrt(volume).
template <class Real = double> Real truncation_error(const QuadratureRule& rule, int phi_prime);

struct StrengthCheck {
  bool pass = false;
  double max_residual = 0.0;
};

/// Checks every orthonormal basis function of degree <= phi, not just the
/// objective basis.
StrengthCheck verify_strength(const QuadratureRule& rule, int phi, double tol = 1e-10);

/// Distance points must keep from the boundary to count as inside.
inline constexpr double kPiMargin = 1e-10;

/// Positive weights and every point strictly inside the domain.
bool is_pi(const QuadratureRule& rule);

RuleQuality rule_quality(const QuadratureRule& rule);

/// Index of the rule with the smallest xi(phi + 1); ties go to the first.
/// Throws EmptyEnsemble on empty input.
std::size_t select_best_index(std::span<const QuadratureRule> rules, int phi);
const QuadratureRule& select_best(std::span<const QuadratureRule> rules, int phi);

/// Max-abs distance between canonically sorted expanded (point, weight)
/// lists; infinity when the point counts or domains differ.
double rule_distance(const QuadratureRule& a, const QuadratureRule& b);

enum class Precision { standard, extended };

/// Re-runs the minimisation from the rule's own parameters at the given
/// working precision. Throws RefinementDiverged when the truncation error
/// grows; the orbit structure never changes.
QuadratureRule refine(const QuadratureRule& rule, Precision precision);

extern template double truncation_error<double>(const QuadratureRule&, int);
extern template Extended truncation_error<Extended>(const QuadratureRule&, int);

} // namespace symquad
