#include <cmath>

#include "pcp/kernels.hpp"

namespace pcp::kernels::scalar {

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void exp_affine(const double* t, double a, double b, double* out,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double z = a * t[i] + b;
    out[i] = z < -708.0 ? 0.0 : std::exp(z);
  }
}

double sum_one_minus_exp_neg(const double* v, const double* w, std::size_t n) {
  double acc = 0.0;
  if (w) {
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * (-std::expm1(-v[i]));
  } else {
    for (std::size_t i = 0; i < n; ++i) acc += -std::expm1(-v[i]);
  }
  return acc;
}

void sq_dist_accum(const double* x, double y, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y;
    acc[i] += d * d;
  }
}

void em_update(double* x, const double* drift, const double* noise, double dt,
               double scale, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] += drift[i] * dt + scale * noise[i];
}

}  // namespace pcp::kernels::scalar
