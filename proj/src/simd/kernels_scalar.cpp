#include "ara/simd/kernels.hpp"

namespace ara::simd::detail {
namespace {

void sub_scaled(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] -= a * x[i];
}

void scale(double* y, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void accumulate(double* acc, const std::int32_t* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += static_cast<double>(x[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

constexpr KernelTable kScalar{Isa::scalar, sub_scaled, scale, accumulate, dot};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace ara::simd::detail
