#pragma once

// Test-owned reference data: Gauss-Legendre rules, collapsed tensor rules
// over each reference domain, closed-form monomial integrals and a naive
// decomposition counter. Nothing here calls into the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "symquad/domain.hpp"

namespace oracle {

using symquad::DomainKind;

struct Node {
  std::array<double, 3> x;
  double w;
};

/// n-point Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out[static_cast<std::size_t>(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

/// Tensor Gauss rule on [-1,1]^dim pushed through the collapse map of the
/// domain, weights multiplied by the Jacobian.
inline std::vector<Node> collapsed_rule(DomainKind kind, int n) {
  const auto g = gauss_legendre(n);
  std::vector<Node> out;
  const bool three = kind != DomainKind::triangle && kind != DomainKind::quadrilateral;
  for (const auto& [a, wa] : g) {
    for (const auto& [b, wb] : g) {
      const std::size_t nc = three ? g.size() : 1;
      for (std::size_t ic = 0; ic < nc; ++ic) {
        const double c = three ? g[ic].first : 0.0;
        const double wc = three ? g[ic].second : 1.0;
        Node p{{0, 0, 0}, wa * wb * wc};
        switch (kind) {
        case DomainKind::quadrilateral:
        case DomainKind::hexahedron:
          p.x = {a, b, c};
          break;
        case DomainKind::triangle:
        case DomainKind::prism:
          p.x = {(1 + a) * (1 - b) / 2 - 1, b, c};
          p.w *= (1 - b) / 2;
          break;
        case DomainKind::tetrahedron:
          p.x = {(1 + a) * (1 - b) * (1 - c) / 4 - 1, (1 + b) * (1 - c) / 2 - 1, c};
          p.w *= (1 - b) * (1 - c) * (1 - c) / 8;
          break;
        case DomainKind::pyramid:
          p.x = {a * (1 - c) / 2, b * (1 - c) / 2, c};
          p.w *= (1 - c) * (1 - c) / 4;
          break;
        }
        out.push_back(p);
      }
    }
  }
  return out;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// int_{-1}^{1} t^a dt
inline double line_moment(int a) { return a % 2 ? 0.0 : 2.0 / (a + 1); }

/// Coefficients of (-1 + 2s)^a in powers of s.
inline std::vector<double> shifted_powers(int a) {
  std::vector<double> c(static_cast<std::size_t>(a) + 1);
  for (int p = 0; p <= a; ++p) c[static_cast<std::size_t>(p)] = binomial(a, p) * std::pow(2.0, p) * ((a - p) % 2 ? -1.0 : 1.0);
  return c;
}

/// Exact integral of x^a y^b z^c over the reference domain.
inline double monomial_integral(DomainKind kind, int a, int b, int c) {
  switch (kind) {
  case DomainKind::quadrilateral:
    return c ? 0.0 : line_moment(a) * line_moment(b);
  case DomainKind::hexahedron:
    return line_moment(a) * line_moment(b) * line_moment(c);
  case DomainKind::triangle:
  case DomainKind::prism: {
    // x = -1 + 2s, y = -1 + 2t; int s^p t^q over the unit simplex = p! q! / (p+q+2)!
    const auto ca = shifted_powers(a), cb = shifted_powers(b);
    double sum = 0.0;
    for (int p = 0; p <= a; ++p)
      for (int q = 0; q <= b; ++q)
        sum += ca[static_cast<std::size_t>(p)] * cb[static_cast<std::size_t>(q)] * factorial(p) * factorial(q) /
               factorial(p + q + 2);
    const double tri = 4.0 * sum;
    if (kind == DomainKind::triangle) return c ? 0.0 : tri;
    return tri * line_moment(c);
  }
  case DomainKind::tetrahedron: {
    const auto ca = shifted_powers(a), cb = shifted_powers(b), cc = shifted_powers(c);
    double sum = 0.0;
    for (int p = 0; p <= a; ++p)
      for (int q = 0; q <= b; ++q)
        for (int r = 0; r <= c; ++r)
          sum += ca[static_cast<std::size_t>(p)] * cb[static_cast<std::size_t>(q)] * cc[static_cast<std::size_t>(r)] *
                 factorial(p) * factorial(q) * factorial(r) / factorial(p + q + r + 3);
    return 8.0 * sum;
  }
  case DomainKind::pyramid: {
    // Slice at height z is the square |x|, |y| <= h with h = (1 - z) / 2.
    if (a % 2 || b % 2) return 0.0;
    const int m = a + b + 2;
    const double slice = (2.0 / (a + 1)) * (2.0 / (b + 1)) / std::pow(2.0, m);
    double sum = 0.0; // int z^c (1 - z)^m dz
    for (int k = 0; k <= m; ++k) sum += binomial(m, k) * (k % 2 ? -1.0 : 1.0) * line_moment(c + k);
    return slice * sum;
  }
  }
  return 0.0;
}

/// Orbit sizes and parameter counts, written out independently.
struct OrbitRow {
  int size;
  int params;
};

inline std::vector<OrbitRow> orbit_table(DomainKind kind) {
  switch (kind) {
  case DomainKind::triangle: return {{1, 0}, {3, 1}, {6, 2}};
  case DomainKind::quadrilateral: return {{1, 0}, {4, 1}, {4, 1}, {8, 2}};
  case DomainKind::tetrahedron: return {{1, 0}, {4, 1}, {6, 1}, {12, 2}, {24, 3}};
  case DomainKind::prism: return {{1, 0}, {2, 1}, {3, 1}, {6, 2}, {6, 2}, {12, 3}};
  case DomainKind::pyramid: return {{1, 1}, {4, 2}, {4, 2}, {8, 3}};
  case DomainKind::hexahedron: return {{1, 0}, {6, 1}, {8, 1}, {12, 1}, {24, 2}, {24, 2}, {48, 3}};
  }
  return {};
}

/// Every multiplicity vector in the box [0, np / |S_j|] (capped at 1 for
/// parameter-free orbits) whose point total is np.
inline std::vector<std::vector<int>> brute_force_decompositions(DomainKind kind, int np) {
  const auto table = orbit_table(kind);
  std::vector<int> bound;
  for (const auto& r : table) bound.push_back(r.params == 0 ? std::min(1, np / r.size) : np / r.size);
  std::vector<std::vector<int>> out;
  std::vector<int> n(table.size(), 0);
  while (true) {
    int total = 0;
    for (std::size_t j = 0; j < n.size(); ++j) total += n[j] * table[j].size;
    if (total == np) out.push_back(n);
    std::size_t j = n.size();
    while (j > 0) {
      --j;
      if (n[j] < bound[j]) {
        ++n[j];
        break;
      }
      n[j] = 0;
      if (j == 0) return out;
    }
  }
}

} // namespace oracle
