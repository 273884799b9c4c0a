#include <doctest.h>

#include <random>

#include "qdop/kernels.hpp"
#include "qdop/linalg.hpp"

using namespace qdop;
using namespace qdop::kernels;

TEST_CASE("kernel prime is prime") {
  bool prime = true;
  for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= kPrime; ++d)
    if (kPrime % d == 0) prime = false;
  CHECK(prime);
  CHECK(kPrime < (1u << 26));
}

TEST_CASE("vector and scalar kernels agree") {
  if (!avx2_supported()) {
    MESSAGE("AVX2/FMA not available; vector kernel not exercised");
    return;
  }
  std::mt19937_64 rng(1234);
  for (uint32_t p : {kPrime, 101u, 65521u, 3u}) {
    std::uniform_int_distribution<uint32_t> val(0, p - 1);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
      std::vector<uint32_t> d(n), s(n);
      for (auto& x : d) x = val(rng);
      for (auto& x : s) x = val(rng);
      if (n > 2) {
        d[0] = p - 1;
        s[0] = p - 1;
        d[1] = 0;
        s[1] = p - 1;
      }
      for (uint32_t f : {0u, 1u, p - 1, val(rng)}) {
        auto a = d, b = d;
        submul_mod_scalar(a.data(), s.data(), f, n, p);
        submul_mod_avx2(b.data(), s.data(), f, n, p);
        CHECK(a == b);
        a = d;
        b = d;
        scale_mod_scalar(a.data(), f, n, p);
        scale_mod_avx2(b.data(), f, n, p);
        CHECK(a == b);
      }
    }
  }
}

TEST_CASE("rank profile is independent of kernel choice") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t r = 3 + rng() % 20, c = 3 + rng() % 20, k = 1 + rng() % 6;
    // Product of r x k and k x c has rank at most k.
    ModMatrix a(r, k), b(k, c), m(r, c);
    for (auto& x : a.a) x = rng() % kPrime;
    for (auto& x : b.a) x = rng() % kPrime;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        uint64_t s = 0;
        for (std::size_t t = 0; t < k; ++t) s = (s + uint64_t(a.at(i, t)) * b.at(t, j)) % kPrime;
        m.at(i, j) = static_cast<uint32_t>(s);
      }
    force_impl(Impl::Scalar);
    auto r1 = rank_profile_mod(m, kPrime);
    force_impl(std::nullopt);
    auto r2 = rank_profile_mod(m, kPrime);
    CHECK(r1.rank == r2.rank);
    CHECK(r1.pivot_rows == r2.pivot_rows);
    CHECK(r1.rank == std::min({r, c, k}));
  }
}

TEST_CASE("exact solve and rank over the fraction field") {
  ParamField f({"q"});
  auto S = [&](const char* t) { return parse_scalar(t, f); };
  ScalarMatrix a = {{S("q"), S("1")}, {S("1"), S("1/q")}};
  CHECK(rank_exact(a) == 1);
  CHECK_FALSE(solve_square(a, {S("1"), S("2")}).has_value());
  ScalarMatrix b = {{S("q"), S("1")}, {S("1"), S("q")}};
  auto x = solve_square(b, {S("q + 1"), S("q + 1")});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == Scalar(1));
  CHECK((*x)[1] == Scalar(1));
  CHECK(rank_exact(b) == 2);
}
