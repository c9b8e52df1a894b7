#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ara/simd/kernels.hpp"

namespace ara::simd {

namespace detail {
#ifndef ARA_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif
#ifndef ARA_HAVE_NEON
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(ARA_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return detail::avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
      return detail::neon_table() != nullptr;
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("SIMD variant not available: " + std::string(isa_name(isa)));
  switch (isa) {
    case Isa::avx2:
      return *detail::avx2_table();
    case Isa::neon:
      return *detail::neon_table();
    case Isa::scalar:
      break;
  }
  return detail::scalar_table();
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("ARA_SIMD")) {
    std::string_view want(env);
    if (want == "scalar") return detail::scalar_table();
    if (want == "avx2" && isa_available(Isa::avx2)) return kernels_for(Isa::avx2);
    if (want == "neon" && isa_available(Isa::neon)) return kernels_for(Isa::neon);
  }
  if (isa_available(Isa::avx2)) return kernels_for(Isa::avx2);
  if (isa_available(Isa::neon)) return kernels_for(Isa::neon);
  return detail::scalar_table();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace ara::simd
