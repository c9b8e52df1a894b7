#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "ara/rng.hpp"
#include "ara/simd/kernels.hpp"

using namespace ara;
using namespace ara::simd;

namespace {

std::vector<double> random_doubles(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = (uniform01(rng) - 0.5) * std::pow(10.0, static_cast<double>(uniform_int(rng, -6, 6)));
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<Isa> variants() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (isa_available(isa)) out.push_back(isa);
  return out;
}

}  // namespace

TEST_CASE("scalar reference is always available") {
  CHECK(isa_available(Isa::scalar));
  CHECK(kernels_for(Isa::scalar).isa == Isa::scalar);
  CHECK(isa_name(kernels().isa).size() > 0);
}

TEST_CASE("unavailable variants are refused") {
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (!isa_available(isa)) CHECK_THROWS_AS(kernels_for(isa), std::invalid_argument);
}

TEST_CASE("elementwise kernels are bit-identical to the reference") {
  const KernelTable& ref = kernels_for(Isa::scalar);
  Rng rng(99);
  for (Isa isa : variants()) {
    const KernelTable& k = kernels_for(isa);
    CAPTURE(isa_name(isa));
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 33u, 100u, 1023u}) {
      const std::vector<double> x = random_doubles(rng, n);
      const std::vector<double> y0 = random_doubles(rng, n);
      const double a = uniform01(rng) * 3.0 - 1.5;

      std::vector<double> y1 = y0, y2 = y0;
      ref.sub_scaled(y1.data(), x.data(), a, n);
      k.sub_scaled(y2.data(), x.data(), a, n);
      CHECK(same_bits(y1, y2));

      y1 = y0;
      y2 = y0;
      ref.scale(y1.data(), a, n);
      k.scale(y2.data(), a, n);
      CHECK(same_bits(y1, y2));

      std::vector<std::int32_t> ints(n);
      for (auto& v : ints) v = static_cast<std::int32_t>(uniform_int(rng, -1000, 1000));
      y1 = y0;
      y2 = y0;
      ref.accumulate(y1.data(), ints.data(), n);
      k.accumulate(y2.data(), ints.data(), n);
      CHECK(same_bits(y1, y2));

      const double d1 = ref.dot(x.data(), y0.data(), n);
      const double d2 = k.dot(x.data(), y0.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y0[i]);
      CHECK(std::abs(d1 - d2) <= 1e-12 * (mag + 1e-300) + 1e-300);
    }
  }
}

TEST_CASE("reference kernels compute what they claim") {
  const KernelTable& k = kernels_for(Isa::scalar);
  std::vector<double> y{1.0, 2.0, 3.0};
  const std::vector<double> x{1.0, 1.0, 2.0};
  k.sub_scaled(y.data(), x.data(), 2.0, 3);
  CHECK(y == std::vector<double>{-1.0, 0.0, -1.0});
  k.scale(y.data(), -2.0, 3);
  CHECK(y == std::vector<double>{2.0, -0.0, 2.0});
  const std::vector<std::int32_t> ints{1, 2, 3};
  k.accumulate(y.data(), ints.data(), 3);
  CHECK(y == std::vector<double>{3.0, 2.0, 5.0});
  CHECK(k.dot(x.data(), y.data(), 3) == 15.0);
}
