#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "support.hpp"
#include "symquad/basis.hpp"
#include "symquad/rule.hpp"
#include "symquad/solver.hpp"

using namespace symquad;
using namespace testing_support;

namespace {

OrbitTerm term(int id, std::vector<double> params, double weight) {
  OrbitTerm t{id, {}, Extended(weight)};
  for (double p : params) t.params.emplace_back(p);
  return t;
}

QuadratureRule centroid(DomainKind kind) {
  const Domain& d = domain(kind);
  if (kind == DomainKind::pyramid) return QuadratureRule(kind, 1, {term(1, {-0.5}, d.volume)});
  return QuadratureRule(kind, 1, {term(1, {}, d.volume)});
}

QuadratureRule gauss2x2(double alpha = 1 / std::sqrt(3.0)) {
  return QuadratureRule(DomainKind::quadrilateral, 3, {term(3, {alpha}, 1.0)});
}

double monomial_sum(const QuadratureRule& r, int a, int b, int c) {
  const auto pts = r.points<double>();
  const auto w = r.point_weights<double>();
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += w[i] * std::pow(pts[i][0], a) * std::pow(pts[i][1], b) * std::pow(pts[i][2], c);
  return s;
}

double worst_monomial_error(const QuadratureRule& r, int phi) {
  const int dim = r.domain().dimension;
  double worst = 0.0;
  for (int a = 0; a <= phi; ++a)
    for (int b = 0; a + b <= phi; ++b)
      for (int c = 0; a + b + c <= phi && (dim == 3 || c == 0); ++c)
        worst = std::max(worst, std::abs(monomial_sum(r, a, b, c) - oracle::monomial_integral(r.kind(), a, b, c)));
  return worst;
}

std::vector<QuadratureRule> found(DomainKind kind, int np, int phi) {
  SolverConfig cfg;
  cfg.time_budget = 30;
  cfg.max_attempts = 30;
  return find_rules(domain(kind), np, phi, cfg);
}

} // namespace

TEST_CASE("rule construction") {
  const auto r = QuadratureRule(DomainKind::triangle, 5,
                                {term(2, {0.1}, 0.1), term(1, {}, 0.45), term(2, {0.47}, 0.2)});
  CHECK(r.point_count() == 7);
  CHECK(r.terms()[0].orbit_id == 1);
  CHECK(r.decomposition().multiplicities == std::vector<int>{1, 2, 0});
  CHECK(r.flat_params<double>() == std::vector<double>{0.1, 0.47});
  CHECK_THROWS_AS(QuadratureRule(DomainKind::triangle, 1, {term(4, {}, 1)}), std::invalid_argument);
  CHECK_THROWS_AS(QuadratureRule(DomainKind::triangle, 1, {term(2, {}, 1)}), std::invalid_argument);
}

TEST_CASE("truncation error examples") {
  CHECK(truncation_error(centroid(DomainKind::quadrilateral), 2) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(truncation_error(gauss2x2(), 3) <= 1e-12);

  // Triangle centroid at degree 2 against the objective modes evaluated directly.
  const Domain& tri = domain(DomainKind::triangle);
  const auto full = full_indices(DomainKind::triangle, 2);
  const auto vals = ortho_basis_eval<double>(tri, 2, {-1.0 / 3, -1.0 / 3, 0});
  double want = 0.0;
  for (const auto& b : objective_indices(DomainKind::triangle, 2).indices) {
    const auto at = std::find(full.begin(), full.end(), b) - full.begin();
    const double r = 2.0 * vals[static_cast<std::size_t>(at)] - basis_integral<double>(tri, b);
    want += r * r;
  }
  const double xi = truncation_error(centroid(DomainKind::triangle), 2);
  CHECK(xi > 0.0);
  CHECK(xi == doctest::Approx(std::sqrt(want)).epsilon(1e-13));
  CHECK(static_cast<double>(truncation_error<Extended>(centroid(DomainKind::quadrilateral), 2)) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("verify strength examples") {
  const auto g3 = verify_strength(gauss2x2(), 3, 1e-10);
  CHECK(g3.pass);
  CHECK(g3.max_residual <= 1e-13);
  CHECK_FALSE(verify_strength(gauss2x2(), 4, 1e-10).pass);
  CHECK(monomial_sum(gauss2x2(), 4, 0, 0) == doctest::Approx(4.0 / 9).epsilon(1e-14));
  CHECK(oracle::monomial_integral(DomainKind::quadrilateral, 4, 0, 0) == doctest::Approx(4.0 / 5).epsilon(1e-15));
  CHECK(verify_strength(centroid(DomainKind::triangle), 1).pass);
}

TEST_CASE("centroid rules integrate linear functions on every domain") {
  for (DomainKind kind : kAllDomains) {
    if (kind == DomainKind::pyramid) continue; // the pyramid's centroid height comes from the search
    const auto r = centroid(kind);
    CHECK(verify_strength(r, 1).pass);
    CHECK(worst_monomial_error(r, 1) <= 1e-14);
  }
}

TEST_CASE("monomial oracle agrees with the collapsed gauss rule") {
  for (DomainKind kind : kAllDomains) {
    const auto nodes = oracle::collapsed_rule(kind, 8);
    const int dim = domain(kind).dimension;
    for (int a = 0; a <= 6; ++a)
      for (int b = 0; a + b <= 6; ++b)
        for (int c = 0; a + b + c <= 6 && (dim == 3 || c == 0); ++c) {
          double s = 0.0;
          for (const auto& n : nodes) s += n.w * std::pow(n.x[0], a) * std::pow(n.x[1], b) * std::pow(n.x[2], c);
          CHECK(s == doctest::Approx(oracle::monomial_integral(kind, a, b, c)).epsilon(1e-12).scale(1.0));
        }
  }
}

TEST_CASE("is_pi examples") {
  CHECK(is_pi(centroid(DomainKind::triangle)));
  CHECK_FALSE(is_pi(QuadratureRule(DomainKind::triangle, 1, {term(1, {}, 2.1), term(2, {0.2}, -0.1 / 3)})));
  CHECK_FALSE(is_pi(QuadratureRule(DomainKind::triangle, 1, {term(2, {0.5 - 1e-12}, 2.0 / 3)})));
  CHECK(is_pi(QuadratureRule(DomainKind::triangle, 1, {term(2, {0.5 - 1e-6}, 2.0 / 3)})));
}

TEST_CASE("is_pi matches a pointwise check of the expanded rule") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> w(-0.2, 1.0);
  for (DomainKind kind : kAllDomains) {
    const Domain& d = domain(kind);
    for (int t = 0; t < 100; ++t) {
      std::vector<OrbitTerm> terms;
      for (const auto& o : d.orbits) {
        auto inst = random_instance(d, o.id, rng);
        if (t % 3 == 0 && !inst.params.empty()) inst.params[0] = d.orbit(o.id).bounds[0].lower * 0.5;
        terms.push_back(term(o.id, inst.params, w(rng)));
      }
      const QuadratureRule r(kind, 1, terms);
      bool pointwise = true;
      const auto pts = r.points<double>();
      const auto wts = r.point_weights<double>();
      for (std::size_t i = 0; i < pts.size(); ++i) pointwise = pointwise && wts[i] > 0 && boundary_distance(d, pts[i]) > kPiMargin;
      CHECK(is_pi(r) == pointwise);
    }
  }
}

TEST_CASE("select_best") {
  const std::vector<QuadratureRule> rules{gauss2x2(0.5), gauss2x2(1 / std::sqrt(3.0) + 1e-3), gauss2x2(0.9)};
  std::vector<double> xi;
  for (const auto& r : rules) xi.push_back(truncation_error(r, 4));
  const auto want = static_cast<std::size_t>(std::min_element(xi.begin(), xi.end()) - xi.begin());
  CHECK(select_best_index(rules, 3) == want);
  CHECK(select_best_index(std::vector<QuadratureRule>{rules[2]}, 3) == 0);
  const std::vector<QuadratureRule> tie{gauss2x2(0.6), gauss2x2(0.6)};
  CHECK(select_best_index(tie, 3) == 0);
  CHECK_THROWS_AS(select_best_index(std::vector<QuadratureRule>{}, 3), EmptyEnsemble);

  auto perm = rules;
  std::sort(perm.begin(), perm.end(), [](const auto& a, const auto& b) { return a.terms()[0].params[0] > b.terms()[0].params[0]; });
  do {
    CHECK(rule_distance(select_best(perm, 3), rules[want]) == 0.0);
  } while (std::next_permutation(perm.begin(), perm.end(), [](const auto& a, const auto& b) {
    return a.terms()[0].params[0] > b.terms()[0].params[0];
  }));
}

TEST_CASE("refine examples") {
  const auto c = centroid(DomainKind::quadrilateral);
  const auto rc = refine(c, Precision::extended);
  CHECK(rule_distance(rc, c) == 0.0);

  const auto perturbed = gauss2x2(1 / std::sqrt(3.0) + 1e-6);
  const auto fixed = refine(perturbed, Precision::extended);
  const Extended alpha = fixed.terms()[0].params[0];
  const Extended want = 1 / sqrt(Extended(3));
  CHECK(static_cast<double>(abs(alpha - want)) <= 1e-15);
  CHECK(static_cast<double>(truncation_error<Extended>(fixed, 3)) <= 1e-30);
  CHECK(fixed.decomposition() == perturbed.decomposition());

  const auto twice = refine(fixed, Precision::extended);
  CHECK(static_cast<double>(abs(twice.terms()[0].params[0] - alpha)) <= 1e-32);

  const auto d1 = refine(perturbed, Precision::standard);
  CHECK(std::abs(static_cast<double>(d1.terms()[0].params[0]) - 1 / std::sqrt(3.0)) <= 1e-15);
  const auto d2 = refine(d1, Precision::standard);
  CHECK(rule_distance(d1, d2) <= 1e-15);
}

TEST_CASE("refine rejects rules it cannot improve") {
  // Strength 5 is out of reach for four points; the minimiser cannot lower
  // xi from a local minimum, so either the rule comes back unchanged or
  // refinement reports divergence. It must never get worse.
  const auto bogus = QuadratureRule(DomainKind::quadrilateral, 5, {term(3, {1 / std::sqrt(3.0)}, 1.0)});
  const double before = truncation_error(bogus, 5);
  try {
    const auto r = refine(bogus, Precision::standard);
    CHECK(truncation_error(r, 5) <= before);
  } catch (const RefinementDiverged&) {
    CHECK(true);
  }
}

TEST_CASE("found rules: weight sum, strength, monomials and objective agreement") {
  const std::vector<std::tuple<DomainKind, int, int>> cases{
      {DomainKind::triangle, 6, 4},   {DomainKind::quadrilateral, 8, 5}, {DomainKind::tetrahedron, 4, 2},
      {DomainKind::prism, 5, 2},      {DomainKind::pyramid, 5, 2},       {DomainKind::hexahedron, 14, 5}};
  for (const auto& [kind, np, phi] : cases) {
    CAPTURE(short_name(kind));
    const auto rules = found(kind, np, phi);
    CHECK_FALSE(rules.empty());
    for (const auto& r : rules) {
      double total = 0.0;
      for (double w : r.point_weights<double>()) total += w;
      CHECK(total == doctest::Approx(r.domain().volume).epsilon(1e-10));
      CHECK(truncation_error(r, phi) <= 1e-12);
      CHECK(verify_strength(r, phi, 1e-10).pass);
      CHECK(worst_monomial_error(r, phi) <= 1e-10);
      // Symmetric inexactness shows up in both measures.
      CHECK(truncation_error(r, phi + 2) > 1e-8);
      CHECK_FALSE(verify_strength(r, phi + 2, 1e-8).pass);
    }
  }
}

TEST_CASE("rule distance") {
  CHECK(rule_distance(gauss2x2(0.5), gauss2x2(0.5)) == 0.0);
  CHECK(rule_distance(gauss2x2(0.5), gauss2x2(0.5 + 1e-3)) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(std::isinf(rule_distance(gauss2x2(), centroid(DomainKind::quadrilateral))));
}
