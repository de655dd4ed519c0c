#include "symquad/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace symquad {

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("SolverConfig: ") + field + " must be positive");
  };
  require(time_budget > 0, "time_budget");
  require(total_time >= 0, "total_time");
  require(max_attempts >= 0, "max_attempts");
  require(success_threshold > 0, "success_threshold");
  require(max_iterations > 0, "max_iterations");
  require(initial_damping > 0, "initial_damping");
  require(damping_growth > 1, "damping_growth");
  require(fd_step_scale > 0, "fd_step_scale");
  require(rcond > 0, "rcond");
  require(workers >= 1, "workers");
}

// ---------------------------------------------------------------------------
// RuleModel

template <class Real>
RuleModel<Real>::RuleModel(const Domain& d, int phi, Decomposition dec, double rcond)
    : domain_(&d), phi_(phi), dec_(std::move(dec)), rcond_(rcond) {
  if (!decomposition_valid(d, dec_)) {
    throw std::invalid_argument("RuleModel: decomposition " + to_string(dec_) + " is not valid for " +
                                std::string(short_name(d.kind)));
  }
  for (std::size_t j = 0; j < d.orbits.size(); ++j) {
    for (int n = 0; n < dec_.multiplicities[j]; ++n) {
      orbit_ids_.push_back(d.orbits[j].id);
      param_offsets_.push_back(param_count_);
      param_count_ += static_cast<std::size_t>(d.orbits[j].param_count);
    }
  }
  objective_ = objective_indices(d.kind, phi).indices;
  rhs_ = Vector<Real>::Zero(static_cast<Eigen::Index>(objective_.size()));
  for (std::size_t r = 0; r < objective_.size(); ++r) {
    rhs_(static_cast<Eigen::Index>(r)) = basis_integral<Real>(d, objective_[r]);
  }
}

template <class Real> void RuleModel<Real>::clamp(std::span<Real> params) const {
  for (std::size_t n = 0; n < orbit_ids_.size(); ++n) {
    const auto& orbit = domain_->orbit(orbit_ids_[n]);
    clamp_params<Real>(orbit, params.subspan(param_offsets_[n], static_cast<std::size_t>(orbit.param_count)));
  }
}

template <class Real>
std::vector<OrbitInstanceT<Real>> RuleModel<Real>::instances(std::span<const Real> params) const {
  std::vector<Real> p(params.begin(), params.end());
  clamp(p);
  std::vector<OrbitInstanceT<Real>> out;
  for (std::size_t n = 0; n < orbit_ids_.size(); ++n) {
    const auto count = static_cast<std::size_t>(domain_->orbit(orbit_ids_[n]).param_count);
    const auto first = p.begin() + static_cast<std::ptrdiff_t>(param_offsets_[n]);
    out.push_back({orbit_ids_[n], std::vector<Real>(first, first + static_cast<std::ptrdiff_t>(count))});
  }
  return out;
}

template <class Real> Matrix<Real> RuleModel<Real>::assemble(std::span<const Real> params) const {
  if (params.size() != param_count_) {
    throw std::invalid_argument("RuleModel: expected " + std::to_string(param_count_) + " parameters, got " +
                                std::to_string(params.size()));
  }
  std::vector<Real> p(params.begin(), params.end());
  clamp(p);
  PointSet<Real> set;
  std::vector<PointT<Real>> scratch;
  for (std::size_t n = 0; n < orbit_ids_.size(); ++n) {
    const auto count = static_cast<std::size_t>(domain_->orbit(orbit_ids_[n]).param_count);
    scratch.clear();
    expand_orbit_into<Real>(*domain_, orbit_ids_[n], std::span<const Real>(p).subspan(param_offsets_[n], count),
                            scratch);
    for (const auto& q : scratch) set.push(q);
    set.close_segment();
  }
  return orbit_sums<Real>(domain_->kind, objective_, set);
}

template <class Real> ResidualEvaluation<Real> RuleModel<Real>::evaluate(std::span<const Real> params) const {
  const Matrix<Real> a = assemble(params);
  ResidualEvaluation<Real> ev;
  ev.weights = least_squares_weights<Real>(a, rhs_, rcond_);
  ev.residual = a * ev.weights - rhs_;
  ev.xi = ev.residual.norm();
  return ev;
}

template class RuleModel<double>;
template class RuleModel<Extended>;

template <class Real>
ResidualEvaluation<Real> rule_residual(const Domain& d, int phi, const CandidateParamsT<Real>& cand,
                                       double rcond) {
  const RuleModel<Real> model(d, phi, cand.decomposition, rcond);
  return model.evaluate(cand.params);
}

template ResidualEvaluation<double> rule_residual(const Domain&, int, const CandidateParamsT<double>&, double);
template ResidualEvaluation<Extended> rule_residual(const Domain&, int, const CandidateParamsT<Extended>&,
                                                    double);

// ---------------------------------------------------------------------------
// Levenberg-Marquardt

LmOptions LmOptions::from(const SolverConfig& cfg) {
  LmOptions o;
  o.success_threshold = cfg.success_threshold;
  o.max_iterations = cfg.max_iterations;
  o.initial_damping = cfg.initial_damping;
  o.damping_growth = cfg.damping_growth;
  o.fd_step_scale = cfg.fd_step_scale;
  return o;
}

namespace {

template <class Real> bool all_finite(const Vector<Real>& v) {
  using std::isfinite;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!isfinite(v(i))) return false;
  }
  return true;
}

template <class Real> Vector<Real> checked(const ResidualFn<Real>& fn, const Vector<Real>& x) {
  Vector<Real> r = fn(x);
  if (!all_finite(r)) throw NonFiniteResidual("residual evaluation produced a non-finite value");
  return r;
}

} // namespace

template <class Real>
Matrix<Real> finite_difference_jacobian(const ResidualFn<Real>& fn, const Vector<Real>& x,
                                        const Vector<Real>& fx, double scale) {
  using std::abs;
  Matrix<Real> jac(fx.size(), x.size());
  Vector<Real> xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Real h = Real(scale) * (Real(1) + abs(x(i)));
    xp(i) = x(i) + h;
    // The realised step absorbs the rounding of x + h.
    const Real step = xp(i) - x(i);
    jac.col(i) = (checked(fn, xp) - fx) / step;
    xp(i) = x(i);
  }
  return jac;
}

template <class Real>
LmResult<Real> levenberg_marquardt(const ResidualFn<Real>& fn, Vector<Real> x0, const LmOptions& opts,
                                   const ProjectFn<Real>& project) {
  using std::sqrt;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const double fd = opts.fd_step_scale > 0 ? opts.fd_step_scale : static_cast<double>(sqrt(eps));
  const Real step_tol = Real(4) * eps;

  LmResult<Real> res;
  res.x = std::move(x0);
  if (project) project(res.x);
  Vector<Real> r = checked(fn, res.x);
  res.xi = r.norm();
  res.accepted_xi.push_back(static_cast<double>(res.xi));

  if (res.xi <= Real(opts.success_threshold)) {
    res.reason = LmStop::converged;
    return res;
  }
  if (res.x.size() == 0) {
    res.reason = LmStop::stalled;
    return res;
  }

  Matrix<Real> jac = finite_difference_jacobian(fn, res.x, r, fd);
  Matrix<Real> jtj = jac.transpose() * jac;
  Vector<Real> grad = jac.transpose() * r;
  Real mu = Real(opts.initial_damping) * jtj.diagonal().maxCoeff();
  if (!(mu > Real(0))) mu = Real(opts.initial_damping);
  const Real mu_max = Real(1e32) * (Real(1) + jtj.diagonal().maxCoeff());

  res.reason = LmStop::max_iterations;
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    Matrix<Real> lhs = jtj;
    lhs.diagonal().array() += mu;
    const Vector<Real> delta = lhs.ldlt().solve(-grad);
    res.damping.push_back(static_cast<double>(mu));
    if (!all_finite(delta) || delta.norm() <= step_tol * (res.x.norm() + step_tol)) {
      res.step_accepted.push_back(false);
      res.reason = LmStop::stalled;
      break;
    }
    Vector<Real> trial = res.x + delta;
    if (project) project(trial);
    const Vector<Real> rt = checked(fn, trial);
    const Real xt = rt.norm();
    if (xt < res.xi) {
      res.step_accepted.push_back(true);
      res.x = std::move(trial);
      r = rt;
      res.xi = xt;
      res.accepted_xi.push_back(static_cast<double>(xt));
      mu /= Real(opts.damping_growth);
      if (res.xi <= Real(opts.success_threshold)) {
        res.reason = LmStop::converged;
        break;
      }
      jac = finite_difference_jacobian(fn, res.x, r, fd);
      jtj = jac.transpose() * jac;
      grad = jac.transpose() * r;
    } else {
      res.step_accepted.push_back(false);
      mu *= Real(opts.damping_growth);
      if (mu > mu_max) {
        res.reason = LmStop::damping_overflow;
        break;
      }
    }
  }
  return res;
}

template Matrix<double> finite_difference_jacobian(const ResidualFn<double>&, const Vector<double>&,
                                                   const Vector<double>&, double);
template Matrix<Extended> finite_difference_jacobian(const ResidualFn<Extended>&, const Vector<Extended>&,
                                                     const Vector<Extended>&, double);
template LmResult<double> levenberg_marquardt(const ResidualFn<double>&, Vector<double>, const LmOptions&,
                                              const ProjectFn<double>&);
template LmResult<Extended> levenberg_marquardt(const ResidualFn<Extended>&, Vector<Extended>,
                                                const LmOptions&, const ProjectFn<Extended>&);

// ---------------------------------------------------------------------------
// Seeding and search

CandidateParams seed_orbits(const Domain& d, const Decomposition& dec, std::mt19937_64& rng) {
  CandidateParams cand{dec, {}};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t j = 0; j < d.orbits.size(); ++j) {
    const auto& orbit = d.orbits[j];
    const auto k = static_cast<std::size_t>(orbit.param_count);
    std::vector<double> p(k);
    for (int n = 0; n < dec.multiplicities[j]; ++n) {
      do {
        for (std::size_t m = 0; m < k; ++m) {
          const double lo = orbit.bounds[m].lower;
          const double hi = static_upper(orbit, m);
          p[m] = lo + (hi - lo) * unit(rng);
        }
      } while (!params_feasible<double>(orbit, p));
      cand.params.insert(cand.params.end(), p.begin(), p.end());
    }
  }
  return cand;
}

QuadratureRule make_rule(const RuleModel<double>& model, std::span<const double> params,
                         const Vector<double>& weights) {
  const auto inst = model.instances(params);
  std::vector<OrbitTerm> terms;
  for (std::size_t n = 0; n < inst.size(); ++n) {
    OrbitTerm t;
    t.orbit_id = inst[n].orbit_id;
    for (double v : inst[n].params) t.params.emplace_back(v);
    t.weight = Extended(weights(static_cast<Eigen::Index>(n)));
    terms.push_back(std::move(t));
  }
  return QuadratureRule(model.domain().kind, model.strength(), std::move(terms));
}

namespace {

using Clock = std::chrono::steady_clock;

struct Found {
  std::size_t decomposition;
  std::size_t attempt;
  QuadratureRule rule;
};

std::mt19937_64 attempt_rng(std::uint64_t seed, std::size_t decomposition, std::size_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(decomposition), static_cast<std::uint32_t>(attempt)};
  return std::mt19937_64(seq);
}

} // namespace

std::vector<QuadratureRule> find_rules(const Domain& d, int np, int phi, const SolverConfig& cfg,
                                       SearchStats* stats) {
  cfg.validate();
  if (np < 1 || phi < 1) throw std::invalid_argument("find_rules: need np >= 1 and phi >= 1");

  SearchStats local;
  const auto decompositions = enumerate_decompositions(d, np);
  local.decompositions = decompositions.size();
  const LmOptions lm = LmOptions::from(cfg);
  const auto search_start = Clock::now();
  auto seconds_since = [](Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::vector<Found> found;
  std::mutex found_mutex;
  std::atomic<std::size_t> attempts_total{0};

  for (std::size_t di = 0; di < decompositions.size(); ++di) {
    if (cfg.total_time > 0 && seconds_since(search_start) > cfg.total_time) break;
    const Decomposition& dec = decompositions[di];
    if (!decomposition_viable(d, dec, phi)) continue;
    ++local.viable;

    const RuleModel<double> model(d, phi, dec, cfg.rcond);
    // Without free parameters every attempt would be identical.
    const std::size_t cap = model.param_count() == 0 ? 1 : static_cast<std::size_t>(cfg.max_attempts);
    const auto t0 = Clock::now();
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
      for (;;) {
        const std::size_t attempt = next.fetch_add(1);
        if (cap != 0 && attempt >= cap) return;
        // The first attempt always runs, as in a repeat-until loop.
        if (attempt > 0 && seconds_since(t0) > cfg.time_budget) return;
        if (attempt > 0 && cfg.total_time > 0 && seconds_since(search_start) > cfg.total_time) return;
        ++attempts_total;

        auto rng = attempt_rng(cfg.rng_seed, di, attempt);
        const CandidateParams seed = seed_orbits(d, dec, rng);
        const ResidualFn<double> fn = [&model](const Vector<double>& x) {
          return model.evaluate(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))).residual;
        };
        const ProjectFn<double> project = [&model](Vector<double>& x) {
          model.clamp(std::span<double>(x.data(), static_cast<std::size_t>(x.size())));
        };
        Vector<double> x0 = Eigen::Map<const Vector<double>>(seed.params.data(),
                                                            static_cast<Eigen::Index>(seed.params.size()));
        LmResult<double> out;
        try {
          out = levenberg_marquardt<double>(fn, std::move(x0), lm, project);
        } catch (const NonFiniteResidual&) {
          continue;
        }
        if (!(out.xi <= cfg.success_threshold)) continue;
        const std::span<const double> xs(out.x.data(), static_cast<std::size_t>(out.x.size()));
        const auto ev = model.evaluate(xs);
        QuadratureRule rule = make_rule(model, xs, ev.weights);
        std::lock_guard lock(found_mutex);
        found.push_back({di, attempt, std::move(rule)});
      }
    };

    if (cfg.workers == 1 || cap == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
    }
  }

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    return std::tie(a.decomposition, a.attempt) < std::tie(b.decomposition, b.attempt);
  });
  std::vector<QuadratureRule> rules;
  for (auto& f : found) {
    const bool dup = std::any_of(rules.begin(), rules.end(), [&](const QuadratureRule& r) {
      return rule_distance(r, f.rule) <= kDistinctRuleTolerance;
    });
    if (!dup) rules.push_back(std::move(f.rule));
  }
  local.attempts = attempts_total.load();
  local.successes = found.size();
  if (stats) *stats = local;
  return rules;
}

} // namespace symquad
