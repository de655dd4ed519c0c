#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symquad/errors.hpp"

namespace symquad {

enum class DomainKind : std::uint8_t {
  triangle,
  quadrilateral,
  tetrahedron,
  prism,
  pyramid,
  hexahedron,
};

inline constexpr std::array<DomainKind, 6> kAllDomains = {
    DomainKind::triangle, DomainKind::quadrilateral, DomainKind::tetrahedron,
    DomainKind::prism,    DomainKind::pyramid,       DomainKind::hexahedron};

/// Short names used on the command line and in rule files.
std::string_view short_name(DomainKind kind);
std::optional<DomainKind> parse_domain(std::string_view name);

/// Points always carry three coordinates; z is zero on 2D domains.
template <class Real> using PointT = std::array<Real, 3>;
using Point = PointT<double>;

/// x -> M x + t with integer entries. Every symmetry of every reference
/// domain is of this form, so images are exact in any precision.
struct AffineMap {
  std::array<std::array<int, 3>, 3> linear{};
  std::array<int, 3> shift{};

  template <class Real> PointT<Real> apply(const PointT<Real>& p) const {
    PointT<Real> q;
    for (std::size_t r = 0; r < 3; ++r) {
      Real acc = Real(shift[r]);
      for (std::size_t c = 0; c < 3; ++c) {
        if (linear[r][c] != 0) acc += Real(linear[r][c]) * p[c];
      }
      q[r] = acc;
    }
    return q;
  }
};

/// Directions spanned by the points of an orbit, used for the viability
/// test. kPlanar covers the whole plane in 2D and the xy-plane in 3D.
enum SpanBits : unsigned {
  kSpanNone = 0,
  kPlanar = 1u << 0,
  kAxial = 1u << 1,
};

/// Feasible interval of one orbital parameter:
///   lower <= p[k] <= upper + sum_m coupling[m] * p[m].
struct ParamBound {
  double lower = 0.0;
  double upper = 0.0;
  std::array<double, 3> coupling{};
};

struct OrbitDescriptor {
  int id = 0; ///< 1-based, S_id
  int point_count = 0;
  int param_count = 0;
  std::vector<ParamBound> bounds;
  /// Parameters are clamped in this order; coupled bounds refer only to
  /// parameters that appear earlier in it.
  std::vector<int> clamp_order;
  /// Unset means unbounded.
  std::optional<int> max_multiplicity;
  unsigned span = kSpanNone;
  /// Indices into Domain::group of one element per distinct image of a
  /// generic generator point.
  std::vector<std::size_t> coset;
};

struct Domain {
  DomainKind kind{};
  int dimension = 0;
  double volume = 0.0;
  std::vector<Point> vertices;
  std::vector<OrbitDescriptor> orbits;
  std::vector<AffineMap> group;
  /// Bits that must be spanned before quadratics can be integrated.
  unsigned full_span = 0;
  /// True when orbit centres move along the axis with their parameters
  /// (pyramid), so any two instances together span the axis.
  bool axial_offsets = false;

  const OrbitDescriptor& orbit(int id) const { return orbits.at(static_cast<std::size_t>(id - 1)); }
};

/// Interior margin for clamped parameters.
inline constexpr double kInteriorMargin = 1e-10;
/// Two symmetric images closer than this are considered identical.
inline constexpr double kDedupTolerance = 1e-12;

const Domain& domain(DomainKind kind);

double volume(const Domain& d);
const std::vector<OrbitDescriptor>& orbit_catalog(const Domain& d);

template <class Real> struct OrbitInstanceT {
  int orbit_id = 0;
  std::vector<Real> params;
};
using OrbitInstance = OrbitInstanceT<double>;

/// Cartesian generator point of an orbit (the image under the identity).
template <class Real>
PointT<Real> orbit_generator(const Domain& d, int orbit_id, std::span<const Real> params);

/// All |S| images without any degeneracy check.
template <class Real>
void expand_orbit_into(const Domain& d, int orbit_id, std::span<const Real> params,
                       std::vector<PointT<Real>>& out);

/// Exactly |S| distinct points; throws DegenerateOrbit when two images
/// coincide within kDedupTolerance.
template <class Real>
std::vector<PointT<Real>> expand_orbit(const Domain& d, const OrbitInstanceT<Real>& inst);

/// Clamp in place. Idempotent; feasible inputs are left untouched.
template <class Real>
void clamp_params(const OrbitDescriptor& orbit, std::span<Real> params);

template <class Real>
OrbitInstanceT<Real> clamp_orbit(const Domain& d, OrbitInstanceT<Real> inst) {
  clamp_params<Real>(d.orbit(inst.orbit_id), inst.params);
  return inst;
}

template <class Real> bool params_feasible(const OrbitDescriptor& orbit, std::span<const Real> params);

/// Largest value parameter k can take for any feasible choice of the others.
double static_upper(const OrbitDescriptor& orbit, std::size_t k);

/// Signed distance from p to the boundary; negative outside.
template <class Real> Real boundary_distance(const Domain& d, const PointT<Real>& p);

struct Decomposition {
  std::vector<int> multiplicities; ///< n_j, one per orbit type
  int point_count = 0;

  int instance_count() const;
  auto operator<=>(const Decomposition&) const = default;
};

/// Number of free orbital parameters, sum_j n_j * [[S_j]].
int parameter_count(const Domain& d, const Decomposition& dec);

bool decomposition_valid(const Domain& d, const Decomposition& dec);

/// Every multiplicity vector with sum_j n_j |S_j| = np, in ascending
/// lexicographic order.
std::vector<Decomposition> enumerate_decompositions(const Domain& d, int np);

/// False only when the used orbits lie in a proper affine subspace through
/// the centroid, which rules out exact integration of quadratics.
bool decomposition_viable(const Domain& d, const Decomposition& dec, int phi);

std::string to_string(const Decomposition& dec);

// ---------------------------------------------------------------------------

template <class Real>
PointT<Real> orbit_generator(const Domain& d, int orbit_id, std::span<const Real> p) {
  const Real one(1), two(2), three(3), four(4), zero(0);
  auto tri = [&](const Real& l1, const Real& l2, const Real& l3) {
    return PointT<Real>{-l1 + l2 - l3, -l1 - l2 + l3, zero};
  };
  switch (d.kind) {
  case DomainKind::triangle:
    switch (orbit_id) {
    case 1: return tri(one / three, one / three, one / three);
    case 2: return tri(p[0], p[0], one - two * p[0]);
    default: return tri(p[0], p[1], one - p[0] - p[1]);
    }
  case DomainKind::quadrilateral:
    switch (orbit_id) {
    case 1: return {zero, zero, zero};
    case 2: return {p[0], zero, zero};
    case 3: return {p[0], p[0], zero};
    default: return {p[0], p[1], zero};
    }
  case DomainKind::tetrahedron: {
    auto tet = [](const Real& l1, const Real& l2, const Real& l3, const Real& l4) {
      return PointT<Real>{-l1 + l2 - l3 - l4, -l1 - l2 + l3 - l4, -l1 - l2 - l3 + l4};
    };
    const Real half = one / two;
    switch (orbit_id) {
    case 1: return tet(one / four, one / four, one / four, one / four);
    case 2: return tet(p[0], p[0], p[0], one - three * p[0]);
    case 3: return tet(p[0], p[0], half - p[0], half - p[0]);
    case 4: return tet(p[0], p[0], p[1], one - two * p[0] - p[1]);
    default: return tet(p[0], p[1], p[2], one - p[0] - p[1] - p[2]);
    }
  }
  case DomainKind::prism: {
    PointT<Real> q;
    Real z = zero;
    switch (orbit_id) {
    case 1: q = tri(one / three, one / three, one / three); break;
    case 2: q = tri(one / three, one / three, one / three); z = p[0]; break;
    case 3: q = tri(p[0], p[0], one - two * p[0]); break;
    case 4: q = tri(p[0], p[0], one - two * p[0]); z = p[1]; break;
    case 5: q = tri(p[0], p[1], one - p[0] - p[1]); break;
    default: q = tri(p[0], p[1], one - p[0] - p[1]); z = p[2]; break;
    }
    q[2] = z;
    return q;
  }
  case DomainKind::pyramid:
    switch (orbit_id) {
    case 1: return {zero, zero, p[0]};
    case 2: return {p[0], zero, p[1]};
    case 3: return {p[0], p[0], p[1]};
    default: return {p[0], p[1], p[2]};
    }
  case DomainKind::hexahedron:
    switch (orbit_id) {
    case 1: return {zero, zero, zero};
    case 2: return {p[0], zero, zero};
    case 3: return {p[0], p[0], p[0]};
    case 4: return {p[0], p[0], zero};
    case 5: return {p[0], p[1], zero};
    case 6: return {p[0], p[0], p[1]};
    default: return {p[0], p[1], p[2]};
    }
  }
  return {zero, zero, zero};
}

template <class Real>
void expand_orbit_into(const Domain& d, int orbit_id, std::span<const Real> params,
                       std::vector<PointT<Real>>& out) {
  const PointT<Real> g = orbit_generator<Real>(d, orbit_id, params);
  for (std::size_t e : d.orbit(orbit_id).coset) out.push_back(d.group[e].apply(g));
}

template <class Real>
std::vector<PointT<Real>> expand_orbit(const Domain& d, const OrbitInstanceT<Real>& inst) {
  const OrbitDescriptor& orbit = d.orbit(inst.orbit_id);
  if (static_cast<int>(inst.params.size()) != orbit.param_count) {
    throw std::invalid_argument("expand_orbit: S" + std::to_string(inst.orbit_id) + " takes " +
                                std::to_string(orbit.param_count) + " parameters");
  }
  std::vector<PointT<Real>> pts;
  pts.reserve(static_cast<std::size_t>(orbit.point_count));
  expand_orbit_into<Real>(d, inst.orbit_id, inst.params, pts);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      Real dist(0);
      for (std::size_t c = 0; c < 3; ++c) {
        using std::abs;
        using std::max;
        dist = max(dist, Real(abs(pts[a][c] - pts[b][c])));
      }
      if (dist <= Real(kDedupTolerance)) {
        throw DegenerateOrbit("S" + std::to_string(inst.orbit_id) +
                              " parameters collapse symmetric images");
      }
    }
  }
  return pts;
}

template <class Real>
Real effective_upper(const ParamBound& b, std::span<const Real> params) {
  Real hi(b.upper);
  for (std::size_t m = 0; m < params.size() && m < 3; ++m) {
    if (b.coupling[m] != 0.0) hi += Real(b.coupling[m]) * params[m];
  }
  return hi;
}

template <class Real> void clamp_params(const OrbitDescriptor& orbit, std::span<Real> params) {
  for (int k : orbit.clamp_order) {
    const auto& b = orbit.bounds[static_cast<std::size_t>(k)];
    const Real lo(b.lower);
    const Real hi = effective_upper<Real>(b, std::span<const Real>(params.data(), params.size()));
    Real& v = params[static_cast<std::size_t>(k)];
    if (!(v >= lo)) v = lo; // also catches NaN
    if (v > hi) v = hi;
  }
}

template <class Real>
bool params_feasible(const OrbitDescriptor& orbit, std::span<const Real> params) {
  if (static_cast<int>(params.size()) != orbit.param_count) return false;
  for (int k : orbit.clamp_order) {
    const auto& b = orbit.bounds[static_cast<std::size_t>(k)];
    const Real& v = params[static_cast<std::size_t>(k)];
    if (!(v >= Real(b.lower)) || v > effective_upper<Real>(b, params)) return false;
  }
  return true;
}

template <class Real> Real boundary_distance(const Domain& d, const PointT<Real>& p) {
  using std::abs;
  using std::min;
  using std::sqrt;
  const Real one(1);
  const Real& x = p[0];
  const Real& y = p[1];
  const Real& z = p[2];
  switch (d.kind) {
  case DomainKind::triangle:
    return min(min(x + one, y + one), Real((-x - y) / sqrt(Real(2))));
  case DomainKind::quadrilateral:
    return min(Real(one - abs(x)), Real(one - abs(y)));
  case DomainKind::tetrahedron:
    return min(min(x + one, y + one), min(z + one, Real((-one - x - y - z) / sqrt(Real(3)))));
  case DomainKind::prism:
    return min(min(min(x + one, y + one), Real((-x - y) / sqrt(Real(2)))), Real(one - abs(z)));
  case DomainKind::pyramid: {
    const Real side = (one - z - Real(2) * abs(x)) / sqrt(Real(5));
    const Real side2 = (one - z - Real(2) * abs(y)) / sqrt(Real(5));
    return min(min(side, side2), z + one);
  }
  case DomainKind::hexahedron:
    return min(min(Real(one - abs(x)), Real(one - abs(y))), Real(one - abs(z)));
  }
  return Real(0);
}

} // namespace symquad
