#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "symquad/basis.hpp"
#include "symquad/domain.hpp"
#include "symquad/linalg.hpp"
#include "symquad/rule.hpp"

namespace symquad {

struct SolverConfig {
  /// Wall-clock seconds spent on each decomposition (restarted per
  /// decomposition).
  double time_budget = 1.0;
  /// Optional cap on the whole search in seconds; 0 disables it.
  double total_time = 0.0;
  /// Cap on seeded minimisations per decomposition; 0 means only the time
  /// budget applies. With a cap that binds before the clock, output is
  /// reproducible for a fixed seed.
  int max_attempts = 0;
  double success_threshold = 1e-12;
  int max_iterations = 200;
  double initial_damping = 1e-3;
  double damping_growth = 2.0;
  double fd_step_scale = std::sqrt(std::numeric_limits<double>::epsilon());
  double rcond = kDefaultRcond;
  std::uint64_t rng_seed = 42;
  int workers = 1;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

template <class Real> struct CandidateParamsT {
  Decomposition decomposition;
  std::vector<Real> params;
};
using CandidateParams = CandidateParamsT<double>;

template <class Real> struct ResidualEvaluation {
  Vector<Real> residual;
  Vector<Real> weights; ///< one per orbit instance
  Real xi{};
};

/// Residual assembly for one decomposition at one strength: orbit sums of
/// the objective basis, weights eliminated by least squares.
template <class Real> class RuleModel {
public:
  RuleModel(const Domain& d, int phi, Decomposition dec, double rcond = kDefaultRcond);

  const Domain& domain() const { return *domain_; }
  int strength() const { return phi_; }
  const Decomposition& decomposition() const { return dec_; }
  std::size_t param_count() const { return param_count_; }
  std::size_t instance_count() const { return orbit_ids_.size(); }
  const std::vector<BasisIndex>& objective() const { return objective_; }
  const Vector<Real>& rhs() const { return rhs_; }

  void clamp(std::span<Real> params) const;
  std::vector<OrbitInstanceT<Real>> instances(std::span<const Real> params) const;
  /// Coefficient matrix for the (clamped) parameters.
  Matrix<Real> assemble(std::span<const Real> params) const;
  ResidualEvaluation<Real> evaluate(std::span<const Real> params) const;

private:
  const Domain* domain_;
  int phi_;
  Decomposition dec_;
  double rcond_;
  std::vector<int> orbit_ids_;
  std::vector<std::size_t> param_offsets_;
  std::size_t param_count_ = 0;
  std::vector<BasisIndex> objective_;
  Vector<Real> rhs_;
};

template <class Real>
ResidualEvaluation<Real> rule_residual(const Domain& d, int phi, const CandidateParamsT<Real>& cand,
                                       double rcond = kDefaultRcond);

struct LmOptions {
  double success_threshold = 1e-12;
  int max_iterations = 200;
  double initial_damping = 1e-3;
  double damping_growth = 2.0;
  /// Forward-difference step is fd_step_scale * (1 + |x_i|); values <= 0
  /// select sqrt(machine epsilon) of the working type.
  double fd_step_scale = 0.0;

  static LmOptions from(const SolverConfig& cfg);
};

enum class LmStop { converged, max_iterations, damping_overflow, stalled };

template <class Real> struct LmResult {
  Vector<Real> x;
  Real xi{};
  int iterations = 0;
  LmStop reason = LmStop::stalled;
  /// Residual norm after the start point and after every accepted step.
  std::vector<double> accepted_xi;
  /// Damping value in force before each trial step.
  std::vector<double> damping;
  std::vector<bool> step_accepted;
};

template <class Real> using ResidualFn = std::function<Vector<Real>(const Vector<Real>&)>;
template <class Real> using ProjectFn = std::function<void(Vector<Real>&)>;

/// Damped Gauss-Newton with a forward-difference Jacobian. `project`, when
/// given, maps every trial point back into the feasible set. Throws
/// NonFiniteResidual if the residual is ever NaN or Inf.
template <class Real>
LmResult<Real> levenberg_marquardt(const ResidualFn<Real>& fn, Vector<Real> x0, const LmOptions& opts,
                                   const ProjectFn<Real>& project = {});

/// Forward-difference Jacobian with step scale * (1 + |x_i|).
template <class Real>
Matrix<Real> finite_difference_jacobian(const ResidualFn<Real>& fn, const Vector<Real>& x,
                                        const Vector<Real>& fx, double scale);

/// Uniform draw of every orbital parameter from its feasible interval;
/// coupled constraints are met by rejection.
CandidateParams seed_orbits(const Domain& d, const Decomposition& dec, std::mt19937_64& rng);

/// Builds a rule from clamped candidate parameters and weights.
QuadratureRule make_rule(const RuleModel<double>& model, std::span<const double> params,
                         const Vector<double>& weights);

struct SearchStats {
  std::size_t decompositions = 0;
  std::size_t viable = 0;
  std::size_t attempts = 0;
  std::size_t successes = 0;
};

/// Seeds and minimises every viable decomposition of np points until its
/// time budget (or attempt cap) runs out. Returned rules all satisfy
/// xi(phi) <= success_threshold, are distinct (distance > 1e-8), and come
/// in (decomposition, attempt) order.
std::vector<QuadratureRule> find_rules(const Domain& d, int np, int phi, const SolverConfig& cfg,
                                       SearchStats* stats = nullptr);

inline constexpr double kDistinctRuleTolerance = 1e-8;

extern template class RuleModel<double>;
extern template class RuleModel<Extended>;

} // namespace symquad
