#include "symquad/basis.hpp"

#include <algorithm>
#include <map>

#include "symquad/kernels.hpp"

namespace symquad {

template <class Real> Real jacobi_normalized(int n, int a, int b, Real x) {
  const auto rec = kernels::jacobi_recurrence<Real>(n, a, b);
  std::vector<Real> rows(static_cast<std::size_t>(n) + 1);
  kernels::jacobi_rows_scalar<Real>(rec, &x, nullptr, 1, rows.data());
  return rows.back();
}

std::vector<BasisIndex> full_indices(DomainKind kind, int phi) {
  std::vector<BasisIndex> out;
  const bool three_d = domain(kind).dimension == 3;
  for (int i = 0; i <= phi; ++i) {
    for (int j = 0; j <= phi - i; ++j) {
      if (!three_d) {
        out.push_back({{i, j, 0}});
        continue;
      }
      for (int k = 0; k <= phi - i - j; ++k) out.push_back({{i, j, k}});
    }
  }
  return out;
}

ObjectiveBasis objective_indices(DomainKind kind, int phi) {
  ObjectiveBasis ob{kind, phi, {}};
  auto even = [](int v) { return v % 2 == 0; };
  for (int i = 0; i <= phi; ++i) {
    for (int j = i; j <= phi - i; ++j) {
      switch (kind) {
      case DomainKind::triangle:
        ob.indices.push_back({{i, j, 0}});
        break;
      case DomainKind::quadrilateral:
        if (even(i) && even(j)) ob.indices.push_back({{i, j, 0}});
        break;
      case DomainKind::tetrahedron:
        for (int k = j; k <= phi - i - j; ++k) ob.indices.push_back({{i, j, k}});
        break;
      case DomainKind::prism:
        for (int k = 0; k <= phi - i - j; k += 2) ob.indices.push_back({{i, j, k}});
        break;
      case DomainKind::pyramid:
        if (!even(i) || !even(j)) break;
        for (int k = 0; k <= phi - i - j; ++k) ob.indices.push_back({{i, j, k}});
        break;
      case DomainKind::hexahedron:
        if (!even(i) || !even(j)) break;
        for (int k = j; k <= phi - i - j; k += 2) ob.indices.push_back({{i, j, k}});
        break;
      }
    }
  }
  return ob;
}

namespace {

// Each basis function factors as scale * F_i * G_j * H_k over collapsed
// coordinates, where the Jacobi parameter of G depends on i and that of H
// on i + j. Coordinates enter in homogenised form (u = t*s, s) so the
// products stay polynomial at collapsed vertices.
struct Layout {
  int g_mul = 0, g_add = 0; // G alpha = g_mul*i + g_add
  int h_mul = 0, h_add = 0; // H alpha = h_mul*(i+j) + h_add
  bool has_h = false;
  bool f_scaled = false, g_scaled = false;
  double scale_sq = 1.0;
};

Layout layout(DomainKind kind) {
  switch (kind) {
  case DomainKind::triangle: return {2, 1, 0, 0, false, true, false, 2.0};
  case DomainKind::quadrilateral: return {0, 0, 0, 0, false, false, false, 1.0};
  case DomainKind::tetrahedron: return {2, 1, 2, 2, true, true, true, 8.0};
  case DomainKind::prism: return {2, 1, 0, 0, true, true, false, 2.0};
  case DomainKind::pyramid: return {0, 0, 2, 2, true, true, true, 4.0};
  case DomainKind::hexahedron: return {0, 0, 0, 0, true, false, false, 1.0};
  }
  return {};
}

template <class Real> struct Collapsed {
  std::vector<Real> fu, fs, gu, gs, hu;
};

template <class Real> Collapsed<Real> collapse(DomainKind kind, const PointSet<Real>& pts) {
  const std::size_t m = pts.size();
  Collapsed<Real> c;
  c.fu.resize(m);
  c.fs.resize(m);
  c.gu.resize(m);
  c.gs.resize(m);
  c.hu.resize(m);
  const Real one(1), two(2), four(4);
  for (std::size_t p = 0; p < m; ++p) {
    const Real& x = pts.x[p];
    const Real& y = pts.y[p];
    const Real& z = pts.z[p];
    switch (kind) {
    case DomainKind::triangle:
    case DomainKind::prism:
      c.fu[p] = one + two * x + y;
      c.fs[p] = one - y;
      c.gu[p] = y;
      c.hu[p] = z;
      break;
    case DomainKind::quadrilateral:
    case DomainKind::hexahedron:
      c.fu[p] = x;
      c.gu[p] = y;
      c.hu[p] = z;
      break;
    case DomainKind::tetrahedron:
      c.fu[p] = four * (one + x) + two * (y + z);
      c.fs[p] = -two * (y + z);
      c.gu[p] = one + two * y + z;
      c.gs[p] = one - z;
      c.hu[p] = z;
      break;
    case DomainKind::pyramid:
      c.fu[p] = two * x;
      c.fs[p] = one - z;
      c.gu[p] = two * y;
      c.gs[p] = one - z;
      c.hu[p] = z;
      break;
    }
  }
  return c;
}

} // namespace

template <class Real>
Matrix<Real> orbit_sums(DomainKind kind, std::span<const BasisIndex> indices, const PointSet<Real>& points) {
  using std::sqrt;
  const std::size_t m = points.size();
  Matrix<Real> out(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(points.segments()));
  if (indices.empty() || points.segments() == 0) return out;

  const Layout lay = layout(kind);
  const Collapsed<Real> c = collapse(kind, points);
  int max_i = 0, max_j = 0, max_k = 0;
  for (const auto& idx : indices) {
    max_i = std::max(max_i, idx.degrees[0]);
    max_j = std::max(max_j, idx.degrees[1]);
    max_k = std::max(max_k, idx.degrees[2]);
  }

  auto table = [&](int degree, int alpha, const std::vector<Real>& u, const std::vector<Real>* s) {
    std::vector<Real> rows((static_cast<std::size_t>(degree) + 1) * m);
    const auto rec = kernels::jacobi_recurrence<Real>(degree, alpha, 0);
    kernels::jacobi_rows(rec, u.data(), s ? s->data() : nullptr, m, rows.data());
    return rows;
  };

  const std::vector<Real> f = table(max_i, 0, c.fu, lay.f_scaled ? &c.fs : nullptr);
  std::map<int, std::vector<Real>> g_tables, h_tables;
  for (const auto& idx : indices) {
    const int ga = lay.g_mul * idx.degrees[0] + lay.g_add;
    if (!g_tables.count(ga)) g_tables.emplace(ga, table(max_j, ga, c.gu, lay.g_scaled ? &c.gs : nullptr));
    if (lay.has_h) {
      const int ha = lay.h_mul * (idx.degrees[0] + idx.degrees[1]) + lay.h_add;
      if (!h_tables.count(ha)) h_tables.emplace(ha, table(max_k, ha, c.hu, nullptr));
    }
  }

  const Real scale = sqrt(Real(lay.scale_sq));
  std::vector<Real> row(points.segments());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto& idx = indices[r];
    const auto i = static_cast<std::size_t>(idx.degrees[0]);
    const auto j = static_cast<std::size_t>(idx.degrees[1]);
    const auto k = static_cast<std::size_t>(idx.degrees[2]);
    const Real* fp = f.data() + i * m;
    const Real* gp = g_tables.at(lay.g_mul * idx.degrees[0] + lay.g_add).data() + j * m;
    const Real* hp = nullptr;
    if (lay.has_h) {
      hp = h_tables.at(lay.h_mul * (idx.degrees[0] + idx.degrees[1]) + lay.h_add).data() + k * m;
    }
    kernels::product_segment_sums(scale, fp, gp, hp, points.offsets, row.data());
    for (std::size_t j2 = 0; j2 < row.size(); ++j2) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j2)) = row[j2];
    }
  }
  return out;
}

template <class Real>
Matrix<Real> basis_values(DomainKind kind, std::span<const BasisIndex> indices,
                          std::span<const PointT<Real>> points) {
  PointSet<Real> set;
  for (const auto& p : points) {
    set.push(p);
    set.close_segment();
  }
  return orbit_sums(kind, indices, set);
}

template <class Real> std::vector<Real> ortho_basis_eval(const Domain& d, int phi, const PointT<Real>& point) {
  const auto indices = full_indices(d.kind, phi);
  const Matrix<Real> v = basis_values<Real>(d.kind, indices, std::span<const PointT<Real>>(&point, 1));
  return std::vector<Real>(v.data(), v.data() + v.size());
}

template double jacobi_normalized(int, int, int, double);
template Extended jacobi_normalized(int, int, int, Extended);
template Matrix<double> orbit_sums(DomainKind, std::span<const BasisIndex>, const PointSet<double>&);
template Matrix<Extended> orbit_sums(DomainKind, std::span<const BasisIndex>, const PointSet<Extended>&);
template Matrix<double> basis_values(DomainKind, std::span<const BasisIndex>, std::span<const PointT<double>>);
template Matrix<Extended> basis_values(DomainKind, std::span<const BasisIndex>,
                                       std::span<const PointT<Extended>>);
template std::vector<double> ortho_basis_eval(const Domain&, int, const PointT<double>&);
template std::vector<Extended> ortho_basis_eval(const Domain&, int, const PointT<Extended>&);

} // namespace symquad
