#include "pcp/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace pcp::kernels {

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
bool available() {
#if PCP_HAVE_AVX2_TU
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}
}  // namespace avx2
#endif

namespace {

Backend choose_backend() {
  if (const char* env = std::getenv("PCP_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) {
#if defined(__x86_64__) || defined(_M_X64)
      if (avx2::available()) return Backend::avx2;
#endif
      throw std::runtime_error("PCP_KERNELS=avx2 requested but unavailable");
    }
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2::available()) return Backend::avx2;
#endif
  return Backend::scalar;
}

Backend g_backend = choose_backend();

}  // namespace

Backend active_backend() { return g_backend; }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2 && !avx2::available())
    throw std::runtime_error("set_backend: avx2 unavailable");
#else
  if (b == Backend::avx2)
    throw std::runtime_error("set_backend: avx2 unavailable");
#endif
  g_backend = b;
}

#if defined(__x86_64__) || defined(_M_X64)
#define PCP_DISPATCH(fn, ...)                                       \
  (g_backend == Backend::avx2 ? avx2::fn(__VA_ARGS__)               \
                              : scalar::fn(__VA_ARGS__))
#else
#define PCP_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double sum(const double* x, std::size_t n) { return PCP_DISPATCH(sum, x, n); }

double dot(const double* x, const double* y, std::size_t n) {
  return PCP_DISPATCH(dot, x, y, n);
}

void exp_affine(const double* t, double a, double b, double* out,
                std::size_t n) {
  PCP_DISPATCH(exp_affine, t, a, b, out, n);
}

double sum_one_minus_exp_neg(const double* v, const double* w, std::size_t n) {
  return PCP_DISPATCH(sum_one_minus_exp_neg, v, w, n);
}

void sq_dist_accum(const double* x, double y, double* acc, std::size_t n) {
  PCP_DISPATCH(sq_dist_accum, x, y, acc, n);
}

void em_update(double* x, const double* drift, const double* noise, double dt,
               double scale, std::size_t n) {
  PCP_DISPATCH(em_update, x, drift, noise, dt, scale, n);
}

#undef PCP_DISPATCH

}  // namespace pcp::kernels
