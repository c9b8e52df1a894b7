// aarch64 only; NEON is baseline there so no runtime feature probe is needed.
#include <arm_neon.h>

#include "ara/simd/kernels.hpp"

namespace ara::simd::detail {
namespace {

void sub_scaled(double* y, const double* x, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // vmulq + vsubq rather than vfmsq to round like the scalar reference
    float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vsubq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] -= a * x[i];
}

void scale(double* y, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(y + i), va));
  for (; i < n; ++i) y[i] *= a;
}

void accumulate(double* acc, const std::int32_t* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    int64x2_t wide = vmovl_s32(vld1_s32(x + i));
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vcvtq_f64_s64(wide)));
  }
  for (; i < n; ++i) acc[i] += static_cast<double>(x[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t s = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) s = vaddq_f64(s, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double r = vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

constexpr KernelTable kNeon{Isa::neon, sub_scaled, scale, accumulate, dot};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace ara::simd::detail
