#include "symquad/domain.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace symquad {

namespace {

constexpr double kDelta = kInteriorMargin;

ParamBound box(double lo, double hi) { return ParamBound{lo, hi, {}}; }

ParamBound coupled(double lo, double hi, std::array<double, 3> coupling) {
  return ParamBound{lo, hi, coupling};
}

OrbitDescriptor make_orbit(int id, int points, std::vector<ParamBound> bounds,
                           std::vector<int> order, unsigned span) {
  OrbitDescriptor o;
  o.id = id;
  o.point_count = points;
  o.param_count = static_cast<int>(bounds.size());
  o.bounds = std::move(bounds);
  if (order.empty()) {
    for (int k = 0; k < o.param_count; ++k) order.push_back(k);
  }
  o.clamp_order = std::move(order);
  if (o.param_count == 0) o.max_multiplicity = 1;
  o.span = span;
  return o;
}

AffineMap identity_map() {
  AffineMap m;
  for (std::size_t i = 0; i < 3; ++i) m.linear[i][i] = 1;
  return m;
}

// Affine maps sending vertex v_i to v_perm(i). Vertex differences from v_0
// are 2 e_k, so the linear part has integer columns.
std::vector<AffineMap> simplex_group(const std::vector<Point>& verts, int dim) {
  std::vector<int> perm(verts.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::vector<AffineMap> maps;
  do {
    AffineMap m = identity_map();
    const Point& src0 = verts[0];
    const Point& dst0 = verts[static_cast<std::size_t>(perm[0])];
    for (int c = 0; c < dim; ++c) {
      const Point& dst = verts[static_cast<std::size_t>(perm[static_cast<std::size_t>(c + 1)])];
      for (int r = 0; r < dim; ++r) {
        m.linear[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
            static_cast<int>((dst[static_cast<std::size_t>(r)] - dst0[static_cast<std::size_t>(r)]) / 2.0);
      }
    }
    for (int r = 0; r < dim; ++r) {
      double t = dst0[static_cast<std::size_t>(r)];
      for (int c = 0; c < dim; ++c) {
        t -= m.linear[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * src0[static_cast<std::size_t>(c)];
      }
      m.shift[static_cast<std::size_t>(r)] = static_cast<int>(t);
    }
    maps.push_back(m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return maps;
}

// Signed permutations of the first `dim` axes.
std::vector<AffineMap> hyperoctahedral_group(int dim) {
  std::vector<int> perm(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::vector<AffineMap> maps;
  do {
    for (int signs = 0; signs < (1 << dim); ++signs) {
      AffineMap m = identity_map();
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) m.linear[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = 0;
      }
      for (int r = 0; r < dim; ++r) {
        m.linear[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])] =
            (signs >> r) & 1 ? -1 : 1;
      }
      maps.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return maps;
}

std::vector<AffineMap> with_axial_reflection(const std::vector<AffineMap>& base) {
  std::vector<AffineMap> maps;
  for (int flip : {1, -1}) {
    for (AffineMap m : base) {
      m.linear[2][2] = flip;
      maps.push_back(m);
    }
  }
  return maps;
}

void compute_cosets(Domain& d) {
  static constexpr std::array<double, 3> generic = {0.1372, 0.2419, 0.0831};
  for (auto& orbit : d.orbits) {
    std::vector<double> params(generic.begin(), generic.begin() + orbit.param_count);
    clamp_params<double>(orbit, params);
    const Point g = orbit_generator<double>(d, orbit.id, params);
    std::vector<Point> seen;
    for (std::size_t e = 0; e < d.group.size(); ++e) {
      const Point q = d.group[e].apply(g);
      const bool dup = std::any_of(seen.begin(), seen.end(), [&](const Point& s) {
        return std::abs(s[0] - q[0]) <= kDedupTolerance && std::abs(s[1] - q[1]) <= kDedupTolerance &&
               std::abs(s[2] - q[2]) <= kDedupTolerance;
      });
      if (!dup) {
        seen.push_back(q);
        orbit.coset.push_back(e);
      }
    }
    assert(static_cast<int>(orbit.coset.size()) == orbit.point_count);
  }
}

Domain make_triangle() {
  Domain d;
  d.kind = DomainKind::triangle;
  d.dimension = 2;
  d.volume = 2.0;
  d.vertices = {{-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}};
  d.full_span = kPlanar;
  d.orbits = {
      make_orbit(1, 1, {}, {}, kSpanNone),
      make_orbit(2, 3, {box(kDelta, 0.5 - kDelta)}, {}, kPlanar),
      make_orbit(3, 6, {box(kDelta, 1 - 2 * kDelta), coupled(kDelta, 1 - kDelta, {-1, 0, 0})}, {},
                 kPlanar),
  };
  d.group = simplex_group(d.vertices, 2);
  return d;
}

Domain make_quadrilateral() {
  Domain d;
  d.kind = DomainKind::quadrilateral;
  d.dimension = 2;
  d.volume = 4.0;
  d.vertices = {{-1, -1, 0}, {1, -1, 0}, {1, 1, 0}, {-1, 1, 0}};
  d.full_span = kPlanar;
  const auto unit = box(kDelta, 1 - kDelta);
  d.orbits = {
      make_orbit(1, 1, {}, {}, kSpanNone),
      make_orbit(2, 4, {unit}, {}, kPlanar),
      make_orbit(3, 4, {unit}, {}, kPlanar),
      make_orbit(4, 8, {unit, unit}, {}, kPlanar),
  };
  d.group = hyperoctahedral_group(2);
  return d;
}

Domain make_tetrahedron() {
  Domain d;
  d.kind = DomainKind::tetrahedron;
  d.dimension = 3;
  d.volume = 4.0 / 3.0;
  d.vertices = {{-1, -1, -1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  d.full_span = kPlanar | kAxial;
  const unsigned all = kPlanar | kAxial;
  d.orbits = {
      make_orbit(1, 1, {}, {}, kSpanNone),
      make_orbit(2, 4, {box(kDelta, 1.0 / 3.0 - kDelta)}, {}, all),
      make_orbit(3, 6, {box(kDelta, 0.5 - kDelta)}, {}, all),
      make_orbit(4, 12, {box(kDelta, 0.5 - kDelta), coupled(kDelta, 1 - kDelta, {-2, 0, 0})}, {}, all),
      make_orbit(5, 24,
                 {box(kDelta, 1 - 3 * kDelta), coupled(kDelta, 1 - 2 * kDelta, {-1, 0, 0}),
                  coupled(kDelta, 1 - kDelta, {-1, -1, 0})},
                 {}, all),
  };
  d.group = simplex_group(d.vertices, 3);
  return d;
}

Domain make_prism() {
  Domain d;
  d.kind = DomainKind::prism;
  d.dimension = 3;
  d.volume = 4.0;
  d.vertices = {{-1, -1, -1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}, {1, -1, 1}, {-1, 1, 1}};
  d.full_span = kPlanar | kAxial;
  const auto height = box(kDelta, 1 - kDelta);
  const auto tri2 = box(kDelta, 0.5 - kDelta);
  const auto tri3a = box(kDelta, 1 - 2 * kDelta);
  const auto tri3b = coupled(kDelta, 1 - kDelta, {-1, 0, 0});
  d.orbits = {
      make_orbit(1, 1, {}, {}, kSpanNone),
      make_orbit(2, 2, {height}, {}, kAxial),
      make_orbit(3, 3, {tri2}, {}, kPlanar),
      make_orbit(4, 6, {tri2, height}, {}, kPlanar | kAxial),
      make_orbit(5, 6, {tri3a, tri3b}, {}, kPlanar),
      make_orbit(6, 12, {tri3a, tri3b, height}, {}, kPlanar | kAxial),
  };
  std::vector<Point> base = {{-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}};
  d.group = with_axial_reflection(simplex_group(base, 2));
  return d;
}

Domain make_pyramid() {
  Domain d;
  d.kind = DomainKind::pyramid;
  d.dimension = 3;
  d.volume = 8.0 / 3.0;
  d.vertices = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1}, {0, 0, 1}};
  d.full_span = kPlanar | kAxial;
  d.axial_offsets = true;
  // 0 < alpha, beta <= (1 - gamma)/2; gamma leaves room for a non-empty
  // alpha interval.
  const auto height = box(-1 + kDelta, 1 - 4 * kDelta);
  auto radial = [](std::size_t gamma_index) {
    std::array<double, 3> c{};
    c[gamma_index] = -0.5;
    return coupled(kDelta, 0.5 - kDelta, c);
  };
  d.orbits = {
      make_orbit(1, 1, {box(-1 + kDelta, 1 - kDelta)}, {}, kSpanNone),
      make_orbit(2, 4, {radial(1), height}, {1, 0}, kPlanar),
      make_orbit(3, 4, {radial(1), height}, {1, 0}, kPlanar),
      make_orbit(4, 8, {radial(2), radial(2), height}, {2, 0, 1}, kPlanar),
  };
  d.group = hyperoctahedral_group(2);
  return d;
}

Domain make_hexahedron() {
  Domain d;
  d.kind = DomainKind::hexahedron;
  d.dimension = 3;
  d.volume = 8.0;
  for (int k = 0; k < 8; ++k) {
    d.vertices.push_back({k & 1 ? 1.0 : -1.0, k & 2 ? 1.0 : -1.0, k & 4 ? 1.0 : -1.0});
  }
  d.full_span = kPlanar | kAxial;
  const unsigned all = kPlanar | kAxial;
  const auto unit = box(kDelta, 1 - kDelta);
  d.orbits = {
      make_orbit(1, 1, {}, {}, kSpanNone),    make_orbit(2, 6, {unit}, {}, all),
      make_orbit(3, 8, {unit}, {}, all),      make_orbit(4, 12, {unit}, {}, all),
      make_orbit(5, 24, {unit, unit}, {}, all), make_orbit(6, 24, {unit, unit}, {}, all),
      make_orbit(7, 48, {unit, unit, unit}, {}, all),
  };
  d.group = hyperoctahedral_group(3);
  return d;
}

Domain build(DomainKind kind) {
  Domain d;
  switch (kind) {
  case DomainKind::triangle: d = make_triangle(); break;
  case DomainKind::quadrilateral: d = make_quadrilateral(); break;
  case DomainKind::tetrahedron: d = make_tetrahedron(); break;
  case DomainKind::prism: d = make_prism(); break;
  case DomainKind::pyramid: d = make_pyramid(); break;
  case DomainKind::hexahedron: d = make_hexahedron(); break;
  }
  compute_cosets(d);
  return d;
}

} // namespace

std::string_view short_name(DomainKind kind) {
  switch (kind) {
  case DomainKind::triangle: return "tri";
  case DomainKind::quadrilateral: return "quad";
  case DomainKind::tetrahedron: return "tet";
  case DomainKind::prism: return "pri";
  case DomainKind::pyramid: return "pyr";
  case DomainKind::hexahedron: return "hex";
  }
  return "?";
}

std::optional<DomainKind> parse_domain(std::string_view name) {
  for (DomainKind k : kAllDomains) {
    if (short_name(k) == name) return k;
  }
  return std::nullopt;
}

const Domain& domain(DomainKind kind) {
  static const std::array<Domain, 6> domains = {
      build(DomainKind::triangle), build(DomainKind::quadrilateral), build(DomainKind::tetrahedron),
      build(DomainKind::prism),    build(DomainKind::pyramid),       build(DomainKind::hexahedron)};
  return domains[static_cast<std::size_t>(kind)];
}

double volume(const Domain& d) { return d.volume; }

const std::vector<OrbitDescriptor>& orbit_catalog(const Domain& d) { return d.orbits; }

double static_upper(const OrbitDescriptor& orbit, std::size_t k) {
  const ParamBound& b = orbit.bounds.at(k);
  double hi = b.upper;
  for (std::size_t m = 0; m < 3; ++m) {
    // Couplings are non-positive, so the bound is loosest at the other
    // parameter's lower end.
    if (b.coupling[m] != 0.0) hi += b.coupling[m] * orbit.bounds[m].lower;
  }
  return hi;
}

int Decomposition::instance_count() const {
  int n = 0;
  for (int m : multiplicities) n += m;
  return n;
}

int parameter_count(const Domain& d, const Decomposition& dec) {
  int n = 0;
  for (std::size_t j = 0; j < dec.multiplicities.size(); ++j) {
    n += dec.multiplicities[j] * d.orbits[j].param_count;
  }
  return n;
}

bool decomposition_valid(const Domain& d, const Decomposition& dec) {
  if (dec.multiplicities.size() != d.orbits.size()) return false;
  int total = 0;
  for (std::size_t j = 0; j < d.orbits.size(); ++j) {
    const int n = dec.multiplicities[j];
    if (n < 0) return false;
    if (d.orbits[j].max_multiplicity && n > *d.orbits[j].max_multiplicity) return false;
    total += n * d.orbits[j].point_count;
  }
  return total == dec.point_count;
}

std::vector<Decomposition> enumerate_decompositions(const Domain& d, int np) {
  std::vector<Decomposition> out;
  if (np < 1) return out;
  const std::size_t ns = d.orbits.size();
  std::vector<int> n(ns, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int remaining) {
    if (j == ns) {
      if (remaining == 0) out.push_back(Decomposition{n, np});
      return;
    }
    const auto& orbit = d.orbits[j];
    int cap = remaining / orbit.point_count;
    if (orbit.max_multiplicity) cap = std::min(cap, *orbit.max_multiplicity);
    for (int m = 0; m <= cap; ++m) {
      n[j] = m;
      rec(j + 1, remaining - m * orbit.point_count);
    }
    n[j] = 0;
  };
  rec(0, np);
  return out;
}

bool decomposition_viable(const Domain& d, const Decomposition& dec, int phi) {
  if (phi <= 1) return true;
  unsigned span = kSpanNone;
  for (std::size_t j = 0; j < d.orbits.size(); ++j) {
    if (dec.multiplicities[j] > 0) span |= d.orbits[j].span;
  }
  if (d.axial_offsets && dec.instance_count() >= 2) span |= kAxial;
  return (span & d.full_span) == d.full_span;
}

std::string to_string(const Decomposition& dec) {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < dec.multiplicities.size(); ++j) {
    if (j) os << ',';
    os << dec.multiplicities[j];
  }
  os << ')';
  return os.str();
}

} // namespace symquad
