#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Dense inner loops shared by the simplex tableau and the sampling estimator.
// Every kernel has a scalar reference and, where the target supports it, an
// AVX2 (x86-64) or NEON (aarch64) variant. The variant is chosen once at
// runtime from CPU features; ARA_SIMD=scalar forces the reference path.
//
// Elementwise kernels (sub_scaled, scale, accumulate) perform the same IEEE
// operations in the same order in every variant, so their results are
// bit-identical across variants. dot() reassociates and is only equal to
// the reference within rounding.

namespace ara::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  // y[i] -= a * x[i]
  void (*sub_scaled)(double* y, const double* x, double a, std::size_t n);
  // y[i] *= a
  void (*scale)(double* y, double a, std::size_t n);
  // acc[i] += x[i]
  void (*accumulate)(double* acc, const std::int32_t* x, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

std::string_view isa_name(Isa isa);

// True when the variant is compiled in and the CPU supports it.
bool isa_available(Isa isa);

// Table for a specific variant; throws std::invalid_argument if unavailable.
const KernelTable& kernels_for(Isa isa);

// Runtime-selected table.
const KernelTable& kernels();

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();
}  // namespace detail

}  // namespace ara::simd
