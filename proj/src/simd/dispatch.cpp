#include <atomic>
#include <cstdlib>
#include <cstring>

#include "jetex/error.hpp"
#include "jetex/simd.hpp"

namespace jetex::simd {

namespace {

Backend detect() {
  const char* env = std::getenv("JETEX_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
  return avx2::supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool backend_available(Backend b) { return b == Backend::Scalar || avx2::supported(); }

void set_backend(Backend b) {
  require(backend_available(b), ErrorKind::Precondition, "SIMD backend not available on this CPU");
  current().store(b);
}

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> w, std::span<const double> x) {
  return active_backend() == Backend::Avx2 ? avx2::dot(w, x) : scalar::dot(w, x);
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> x) {
  return active_backend() == Backend::Avx2 ? avx2::weighted_sum(w, x) : scalar::weighted_sum(w, x);
}

cplx weighted_cdot(std::span<const double> w, std::span<const cplx> a, std::span<const cplx> b) {
  return active_backend() == Backend::Avx2 ? avx2::weighted_cdot(w, a, b)
                                           : scalar::weighted_cdot(w, a, b);
}

cplx cauchy_sum(std::span<const double> w, std::span<const cplx> z, std::span<const cplx> g,
                cplx z0, cplx g0, double exclude) {
  return active_backend() == Backend::Avx2 ? avx2::cauchy_sum(w, z, g, z0, g0, exclude)
                                           : scalar::cauchy_sum(w, z, g, z0, g0, exclude);
}

}  // namespace jetex::simd
