#include "symquad/rule.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "symquad/basis.hpp"
#include "symquad/solver.hpp"

namespace symquad {

namespace {

template <class Real> Real narrow(const Extended& v) {
  if constexpr (std::is_same_v<Real, Extended>) {
    return v;
  } else {
    return static_cast<Real>(v);
  }
}

} // namespace

QuadratureRule::QuadratureRule(DomainKind kind, int strength, std::vector<OrbitTerm> terms)
    : kind_(kind), strength_(strength), terms_(std::move(terms)) {
  if (strength_ < 0) throw std::invalid_argument("QuadratureRule: negative strength");
  const Domain& d = domain();
  for (const auto& t : terms_) {
    if (t.orbit_id < 1 || t.orbit_id > static_cast<int>(d.orbits.size())) {
      throw std::invalid_argument("QuadratureRule: orbit id " + std::to_string(t.orbit_id) +
                                  " out of range for " + std::string(short_name(kind)));
    }
    const auto& orbit = d.orbit(t.orbit_id);
    if (static_cast<int>(t.params.size()) != orbit.param_count) {
      throw std::invalid_argument("QuadratureRule: S" + std::to_string(t.orbit_id) + " takes " +
                                  std::to_string(orbit.param_count) + " parameters, got " +
                                  std::to_string(t.params.size()));
    }
    point_count_ += orbit.point_count;
  }
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const OrbitTerm& a, const OrbitTerm& b) { return a.orbit_id < b.orbit_id; });
}

Decomposition QuadratureRule::decomposition() const {
  Decomposition dec;
  dec.multiplicities.assign(domain().orbits.size(), 0);
  for (const auto& t : terms_) ++dec.multiplicities[static_cast<std::size_t>(t.orbit_id - 1)];
  dec.point_count = point_count_;
  return dec;
}

template <class Real> std::vector<Real> QuadratureRule::flat_params() const {
  std::vector<Real> out;
  for (const auto& t : terms_) {
    for (const auto& p : t.params) out.push_back(narrow<Real>(p));
  }
  return out;
}

template <class Real> std::vector<PointT<Real>> QuadratureRule::points() const {
  std::vector<PointT<Real>> out;
  out.reserve(static_cast<std::size_t>(point_count_));
  std::vector<Real> p;
  for (const auto& t : terms_) {
    p.clear();
    for (const auto& v : t.params) p.push_back(narrow<Real>(v));
    expand_orbit_into<Real>(domain(), t.orbit_id, p, out);
  }
  return out;
}

template <class Real> std::vector<Real> QuadratureRule::point_weights() const {
  std::vector<Real> out;
  for (const auto& t : terms_) {
    out.insert(out.end(), static_cast<std::size_t>(domain().orbit(t.orbit_id).point_count),
               narrow<Real>(t.weight));
  }
  return out;
}

template std::vector<double> QuadratureRule::flat_params<double>() const;
template std::vector<Extended> QuadratureRule::flat_params<Extended>() const;
template std::vector<PointT<double>> QuadratureRule::points<double>() const;
template std::vector<PointT<Extended>> QuadratureRule::points<Extended>() const;
template std::vector<double> QuadratureRule::point_weights<double>() const;
template std::vector<Extended> QuadratureRule::point_weights<Extended>() const;

template <class Real> Real truncation_error(const QuadratureRule& rule, int phi_prime) {
  if (phi_prime < 0) throw std::invalid_argument("truncation_error: negative degree");
  const Domain& d = rule.domain();
  const auto objective = objective_indices(d.kind, phi_prime).indices;
  PointSet<Real> set;
  std::vector<PointT<Real>> scratch;
  Vector<Real> w(static_cast<Eigen::Index>(rule.terms().size()));
  std::vector<Real> p;
  for (std::size_t n = 0; n < rule.terms().size(); ++n) {
    const auto& t = rule.terms()[n];
    p.clear();
    for (const auto& v : t.params) p.push_back(narrow<Real>(v));
    scratch.clear();
    expand_orbit_into<Real>(d, t.orbit_id, p, scratch);
    for (const auto& q : scratch) set.push(q);
    set.close_segment();
    w(static_cast<Eigen::Index>(n)) = narrow<Real>(t.weight);
  }
  const Matrix<Real> a = orbit_sums<Real>(d.kind, objective, set);
  Vector<Real> r = a * w;
  for (std::size_t i = 0; i < objective.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) -= basis_integral<Real>(d, objective[i]);
  }
  return r.norm();
}

template double truncation_error<double>(const QuadratureRule&, int);
template Extended truncation_error<Extended>(const QuadratureRule&, int);

StrengthCheck verify_strength(const QuadratureRule& rule, int phi, double tol) {
  const Domain& d = rule.domain();
  const auto indices = full_indices(d.kind, phi);
  const auto pts = rule.points<double>();
  const auto wts = rule.point_weights<double>();
  const Matrix<double> v = basis_values<double>(d.kind, indices, pts);
  const Vector<double> w = Eigen::Map<const Vector<double>>(wts.data(), static_cast<Eigen::Index>(wts.size()));
  Vector<double> r = v * w;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    r(static_cast<Eigen::Index>(i)) -= basis_integral<double>(d, indices[i]);
  }
  StrengthCheck out;
  out.max_residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  out.pass = out.max_residual <= tol;
  return out;
}

namespace {

double min_boundary_distance(const QuadratureRule& rule) {
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& p : rule.points<double>()) dist = std::min(dist, boundary_distance<double>(rule.domain(), p));
  return dist;
}

double min_weight(const QuadratureRule& rule) {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& t : rule.terms()) w = std::min(w, static_cast<double>(t.weight));
  return w;
}

} // namespace

bool is_pi(const QuadratureRule& rule) {
  return min_weight(rule) > 0.0 && min_boundary_distance(rule) > kPiMargin;
}

RuleQuality rule_quality(const QuadratureRule& rule) {
  RuleQuality q;
  q.xi = truncation_error<double>(rule, rule.strength());
  q.xi_next = truncation_error<double>(rule, rule.strength() + 1);
  q.min_weight = min_weight(rule);
  q.min_boundary_distance = min_boundary_distance(rule);
  q.is_pi = q.min_weight > 0.0 && q.min_boundary_distance > kPiMargin;
  return q;
}

std::size_t select_best_index(std::span<const QuadratureRule> rules, int phi) {
  if (rules.empty()) throw EmptyEnsemble("select_best: empty ensemble");
  std::size_t best = 0;
  double best_xi = truncation_error<double>(rules[0], phi + 1);
  for (std::size_t i = 1; i < rules.size(); ++i) {
    const double xi = truncation_error<double>(rules[i], phi + 1);
    if (xi < best_xi) {
      best = i;
      best_xi = xi;
    }
  }
  return best;
}

const QuadratureRule& select_best(std::span<const QuadratureRule> rules, int phi) {
  return rules[select_best_index(rules, phi)];
}

double rule_distance(const QuadratureRule& a, const QuadratureRule& b) {
  if (a.kind() != b.kind() || a.point_count() != b.point_count()) {
    return std::numeric_limits<double>::infinity();
  }
  const auto pa = a.points<double>();
  const auto pb = b.points<double>();
  const auto wa = a.point_weights<double>();
  const auto wb = b.point_weights<double>();
  std::vector<bool> used(pb.size(), false);
  double worst = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    std::size_t pick = pb.size();
    double pick_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (used[j]) continue;
      double dist = std::abs(wa[i] - wb[j]);
      for (std::size_t c = 0; c < 3; ++c) dist = std::max(dist, std::abs(pa[i][c] - pb[j][c]));
      if (dist < pick_dist) {
        pick = j;
        pick_dist = dist;
      }
    }
    used[pick] = true;
    worst = std::max(worst, pick_dist);
  }
  return worst;
}

namespace {

template <class Real> QuadratureRule refine_as(const QuadratureRule& rule) {
  const Domain& d = rule.domain();
  const RuleModel<Real> model(d, rule.strength(), rule.decomposition());
  const std::vector<Real> start = rule.flat_params<Real>();
  const Real xi_in = truncation_error<Real>(rule, rule.strength());
  using std::isfinite;
  using boost::multiprecision::isfinite;
  if (!isfinite(xi_in)) throw RefinementDiverged("refine: input rule has a non-finite truncation error");

  const ResidualFn<Real> fn = [&model](const Vector<Real>& x) {
    return model.evaluate(std::span<const Real>(x.data(), static_cast<std::size_t>(x.size()))).residual;
  };
  const ProjectFn<Real> project = [&model](Vector<Real>& x) {
    model.clamp(std::span<Real>(x.data(), static_cast<std::size_t>(x.size())));
  };
  LmOptions opts;
  opts.success_threshold = 0.0; // iterate until the steps stall
  opts.max_iterations = 100;
  Vector<Real> x0(static_cast<Eigen::Index>(start.size()));
  for (std::size_t i = 0; i < start.size(); ++i) x0(static_cast<Eigen::Index>(i)) = start[i];
  const auto out = levenberg_marquardt<Real>(fn, x0, opts, project);

  const std::span<const Real> xs(out.x.data(), static_cast<std::size_t>(out.x.size()));
  const auto ev = model.evaluate(xs);
  const auto inst = model.instances(xs);
  std::vector<OrbitTerm> terms;
  for (std::size_t n = 0; n < inst.size(); ++n) {
    OrbitTerm t;
    t.orbit_id = inst[n].orbit_id;
    for (const Real& v : inst[n].params) t.params.emplace_back(v);
    t.weight = Extended(ev.weights(static_cast<Eigen::Index>(n)));
    terms.push_back(std::move(t));
  }
  QuadratureRule refined(d.kind, rule.strength(), std::move(terms));
  const Real xi_out = truncation_error<Real>(refined, rule.strength());
  if (xi_out > xi_in) {
    // Refinement may only help; keep the input when it is already at the
    // precision floor, otherwise the input was not near a root.
    if (xi_out > Real(8) * std::numeric_limits<Real>::epsilon() * Real(d.volume)) {
      throw RefinementDiverged("refine: xi grew from " + format_extended(Extended(xi_in), 6) + " to " +
                               format_extended(Extended(xi_out), 6));
    }
    return rule;
  }
  return refined;
}

} // namespace

QuadratureRule refine(const QuadratureRule& rule, Precision precision) {
  return precision == Precision::extended ? refine_as<Extended>(rule) : refine_as<double>(rule);
}

} // namespace symquad
