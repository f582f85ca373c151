#pragma once

#include <cstddef>

// Flat-array numeric kernels used by the quadrature, estimator, and dynamics
// hot loops. Every kernel has a scalar reference implementation and, on
// x86-64, an AVX2+FMA variant; the active backend is chosen once at startup
// from CPUID and can be overridden with the environment variable
// PCP_KERNELS=scalar|avx2 (useful for the equivalence tests). The two
// backends are required to agree to tight tolerances — see tests/test_kernels.
namespace pcp::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
// Force a backend (throws if unavailable on this machine). Intended for
// tests; normal code paths never call this.
void set_backend(Backend b);

// sum_i x[i]
double sum(const double* x, std::size_t n);
// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);
// out[i] = exp(a * t[i] + b); inputs with a*t+b < -708 flush to 0
void exp_affine(const double* t, double a, double b, double* out,
                std::size_t n);
// sum_i w[i] * (1 - exp(-v[i])); w == nullptr means unit weights
double sum_one_minus_exp_neg(const double* v, const double* w, std::size_t n);
// acc[i] += (x[i] - y)^2
void sq_dist_accum(const double* x, double y, double* acc, std::size_t n);
// x[i] += drift[i] * dt + scale * noise[i]   (Euler-Maruyama update)
void em_update(double* x, const double* drift, const double* noise, double dt,
               double scale, std::size_t n);

// Scalar reference implementations (always available; used by the
// equivalence tests as the ground truth).
namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void exp_affine(const double* t, double a, double b, double* out,
                std::size_t n);
double sum_one_minus_exp_neg(const double* v, const double* w, std::size_t n);
void sq_dist_accum(const double* x, double y, double* acc, std::size_t n);
void em_update(double* x, const double* drift, const double* noise, double dt,
               double scale, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
bool available();  // CPUID check; true iff AVX2 and FMA are supported
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void exp_affine(const double* t, double a, double b, double* out,
                std::size_t n);
double sum_one_minus_exp_neg(const double* v, const double* w, std::size_t n);
void sq_dist_accum(const double* x, double y, double* acc, std::size_t n);
void em_update(double* x, const double* drift, const double* noise, double dt,
               double scale, std::size_t n);
}  // namespace avx2
#endif

}  // namespace pcp::kernels
