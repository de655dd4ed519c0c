#pragma once

// Data-parallel inner loops of basis evaluation. Each kernel has a portable
// scalar reference (a template, also used for extended precision) and an
// AVX2/FMA variant for double chosen at runtime.

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace symquad::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
/// Best ISA the CPU supports.
Isa detected_isa();
/// ISA used by the dispatching entry points. Defaults to detected_isa(),
/// or scalar when SYMQUAD_KERNELS=scalar is set in the environment.
Isa active_isa();
/// Throws std::invalid_argument if the CPU cannot run `isa`.
void set_active_isa(Isa isa);

/// Orthonormal three-term recurrence for the Jacobi weight (1-x)^a (1+x)^b:
///   x p_n = off[n+1] p_{n+1} + diag[n] p_n + off[n] p_{n-1}.
template <class Real> struct JacobiRecurrence {
  int degree = 0;
  int alpha = 0;
  int beta = 0;
  Real p0{};
  std::vector<Real> diag;    ///< size degree + 1
  std::vector<Real> off;     ///< off[0] unused; size degree + 1
  std::vector<Real> inv_off; ///< 1 / off[n]
};

template <class Real> JacobiRecurrence<Real> jacobi_recurrence(int degree, int alpha, int beta) {
  using std::sqrt;
  JacobiRecurrence<Real> r;
  r.degree = degree;
  r.alpha = alpha;
  r.beta = beta;
  const Real a(alpha), b(beta);
  // 1 / sqrt(h_0) with h_0 = 2^(a+b+1) a! b! / (a+b+1)!
  Real h0 = Real(2);
  for (int k = 0; k < alpha + beta; ++k) h0 *= Real(2);
  for (int k = 1; k <= alpha; ++k) h0 *= Real(k);
  for (int k = 1; k <= beta; ++k) h0 *= Real(k);
  for (int k = 1; k <= alpha + beta + 1; ++k) h0 /= Real(k);
  r.p0 = Real(1) / sqrt(h0);
  r.diag.assign(static_cast<std::size_t>(degree) + 1, Real(0));
  r.off.assign(static_cast<std::size_t>(degree) + 1, Real(0));
  r.inv_off.assign(static_cast<std::size_t>(degree) + 1, Real(0));
  for (int n = 0; n <= degree; ++n) {
    const Real s = Real(2 * n) + a + b;
    r.diag[static_cast<std::size_t>(n)] =
        (n == 0 && alpha + beta == 0) ? Real(0)
        : n == 0                      ? (b - a) / (a + b + Real(2))
                                      : (b * b - a * a) / (s * (s + Real(2)));
    if (n >= 1) {
      const Real nn(n);
      const Real off = Real(2) / s *
                       sqrt(nn * (nn + a) * (nn + b) * (nn + a + b) / ((s - Real(1)) * (s + Real(1))));
      r.off[static_cast<std::size_t>(n)] = off;
      r.inv_off[static_cast<std::size_t>(n)] = Real(1) / off;
    }
  }
  return r;
}

/// out[n*m + p] = P_n(u_p / s_p) * s_p^n for n = 0..degree, with P_n the
/// orthonormal Jacobi polynomial. This homogenised form stays finite when
/// s_p -> 0 (collapsed vertices). A null `s` means s = 1.
template <class Real>
void jacobi_rows_scalar(const JacobiRecurrence<Real>& rec, const Real* u, const Real* s, std::size_t m,
                        Real* out) {
  const auto deg = static_cast<std::size_t>(rec.degree);
  for (std::size_t p = 0; p < m; ++p) {
    const Real sp = s ? s[p] : Real(1);
    const Real s2 = sp * sp;
    Real prev(0);
    Real cur = rec.p0;
    out[p] = cur;
    for (std::size_t n = 0; n < deg; ++n) {
      const Real next = ((u[p] - rec.diag[n] * sp) * cur - rec.off[n] * s2 * prev) * rec.inv_off[n + 1];
      prev = cur;
      cur = next;
      out[(n + 1) * m + p] = cur;
    }
  }
}

/// out[j] = scale * sum_{p in [offsets[j], offsets[j+1])} f[p] g[p] h[p].
/// A null `g` or `h` is treated as all ones.
template <class Real>
void product_segment_sums_scalar(Real scale, const Real* f, const Real* g, const Real* h,
                                 std::span<const std::size_t> offsets, Real* out) {
  for (std::size_t j = 0; j + 1 < offsets.size(); ++j) {
    Real acc(0);
    for (std::size_t p = offsets[j]; p < offsets[j + 1]; ++p) {
      Real v = f[p];
      if (g) v *= g[p];
      if (h) v *= h[p];
      acc += v;
    }
    out[j] = scale * acc;
  }
}

void jacobi_rows_avx2(const JacobiRecurrence<double>& rec, const double* u, const double* s, std::size_t m,
                      double* out);
void product_segment_sums_avx2(double scale, const double* f, const double* g, const double* h,
                               std::span<const std::size_t> offsets, double* out);

/// Dispatching entry points. Non-double types always take the scalar path.
void jacobi_rows(const JacobiRecurrence<double>& rec, const double* u, const double* s, std::size_t m,
                 double* out);
void product_segment_sums(double scale, const double* f, const double* g, const double* h,
                          std::span<const std::size_t> offsets, double* out);

template <class Real>
void jacobi_rows(const JacobiRecurrence<Real>& rec, const Real* u, const Real* s, std::size_t m, Real* out) {
  jacobi_rows_scalar(rec, u, s, m, out);
}

template <class Real>
void product_segment_sums(Real scale, const Real* f, const Real* g, const Real* h,
                          std::span<const std::size_t> offsets, Real* out) {
  product_segment_sums_scalar(scale, f, g, h, offsets, out);
}

} // namespace symquad::kernels
