#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "symquad/kernels.hpp"

namespace symquad::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("SYMQUAD_KERNELS"); env && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

} // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) throw std::invalid_argument("CPU lacks AVX2/FMA");
  current().store(isa, std::memory_order_relaxed);
}

void jacobi_rows(const JacobiRecurrence<double>& rec, const double* u, const double* s, std::size_t m,
                 double* out) {
  if (active_isa() == Isa::avx2) {
    jacobi_rows_avx2(rec, u, s, m, out);
  } else {
    jacobi_rows_scalar(rec, u, s, m, out);
  }
}

void product_segment_sums(double scale, const double* f, const double* g, const double* h,
                          std::span<const std::size_t> offsets, double* out) {
  if (active_isa() == Isa::avx2) {
    product_segment_sums_avx2(scale, f, g, h, offsets, out);
  } else {
    product_segment_sums_scalar(scale, f, g, h, offsets, out);
  }
}

} // namespace symquad::kernels
