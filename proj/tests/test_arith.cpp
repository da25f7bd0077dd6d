#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "stcurves/arith.hpp"

using namespace stcurves;

namespace {

// Literal orbit sum of zeta^(k s) over the units s mod l^2, in floating point.
double orbit_sum(std::uint32_t k, std::uint32_t ell) {
  const std::uint32_t level = ell * ell;
  double sum = 0.0;
  for (std::uint32_t s = 1; s < level; ++s) {
    if (s % ell == 0) continue;
    sum += std::cos(2.0 * std::numbers::pi * double(k) * double(s) / double(level));
  }
  return sum;
}

CyclotomicInteger random_element(std::uint32_t ell, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-50, 50);
  CyclotomicInteger x(ell);
  for (std::uint32_t k = 0; k < x.level(); ++k) x[k] = dist(rng);
  return x;
}

}  // namespace

TEST_CASE("primality and primitive roots") {
  CHECK(is_prime(2));
  CHECK(is_prime(101));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
  CHECK(is_prime(4194301));
  CHECK_FALSE(is_odd_prime(2));
  CHECK(primitive_root(7) == 3);
  CHECK(primitive_root(11) == 2);
  CHECK(primitive_root(13) == 2);
  CHECK(multiplicative_order(primitive_root(101), 101) == 100);
  CHECK_THROWS_AS(primitive_root(12), std::invalid_argument);
}

TEST_CASE("dlog table") {
  const DlogTable t7 = dlog_table(7);
  const std::uint32_t expected[] = {0, 0, 2, 1, 4, 5, 3};
  for (std::uint64_t x = 1; x < 7; ++x) CHECK(t7[x] == expected[x]);
  CHECK(dlog_table(11)[2] == 1);
  CHECK(dlog_table(11)[1] == 0);
  CHECK(dlog_table(5)[4] == 2);
  CHECK_THROWS_AS(t7.at(0), std::out_of_range);
  CHECK_THROWS_AS(t7.at(7), std::out_of_range);

  SUBCASE("round trip") {
    for (std::uint64_t q : {3ull, 19ull, 101ull, 7919ull}) {
      const DlogTable t(q);
      for (std::uint64_t x = 1; x < q; ++x) REQUIRE(pow_mod(t.root(), t[x], q) == x);
    }
  }

  SUBCASE("non-smallest root") {
    const DlogTable t(19, 3, kDefaultMemoryGuard);
    for (std::uint64_t x = 1; x < 19; ++x) CHECK(pow_mod(3, t[x], 19) == x);
    CHECK_THROWS(DlogTable(19, 4, kDefaultMemoryGuard));
  }

  SUBCASE("memory guard") {
    try {
      DlogTable big(1009, 1000);
      FAIL("expected guard violation");
    } catch (const std::length_error& e) {
      CHECK(std::string(e.what()).find("1000") != std::string::npos);
    }
  }

  SUBCASE("residue table agrees with full table") {
    const DlogTable t(1951);
    const ResidueIndexTable r(1951, 25);
    const ResidueIndexTable r2(t, 25);
    for (std::uint64_t x = 1; x < 1951; ++x) {
      REQUIRE(r[x] == t[x] % 25);
      REQUIRE(r2[x] == t[x] % 25);
    }
  }
}

TEST_CASE("trace of zeta powers") {
  CHECK(trace_of_zeta_power(0, 3) == 6);
  CHECK(trace_of_zeta_power(3, 3) == -3);
  CHECK(trace_of_zeta_power(1, 3) == 0);
  CHECK_THROWS_AS(trace_of_zeta_power(9, 3), std::out_of_range);

  for (std::uint32_t ell : {3u, 5u, 7u}) {
    for (std::uint32_t k = 0; k < ell * ell; ++k) {
      const double lit = orbit_sum(k, ell);
      REQUIRE(std::abs(lit - std::round(lit)) < 1e-6);
      REQUIRE(trace_of_zeta_power(k, ell) == std::lround(lit));
    }
  }
}

TEST_CASE("cyclotomic reduction") {
  const auto r6 = cyclo_reduce(CyclotomicInteger::zeta_power(3, 6));
  CyclotomicInteger want(3);
  want[0] = -1;
  want[3] = -1;
  CHECK(r6 == want);
  CHECK(r6.is_canonical());

  const auto z2 = CyclotomicInteger::zeta_power(3, 2);
  CHECK(cyclo_reduce(z2) == z2);

  CyclotomicInteger want24(5);
  for (int k : {4, 9, 14, 19}) want24[k] = -1;
  CHECK(cyclo_reduce(CyclotomicInteger::zeta_power(5, 24)) == want24);
}

TEST_CASE("cyclotomic multiplication and conjugation") {
  CHECK(cyclo_mul(CyclotomicInteger::zeta_power(5, 3), CyclotomicInteger::zeta_power(5, 7)) ==
        CyclotomicInteger::zeta_power(5, 10));
  CHECK(cyclo_mul(CyclotomicInteger::zeta_power(5, 24), CyclotomicInteger::zeta_power(5, 1)) ==
        CyclotomicInteger::constant(5, 1));

  const auto one = CyclotomicInteger::constant(5, 1);
  const auto z = CyclotomicInteger::zeta_power(5, 1);
  CyclotomicInteger minus_z(5);
  minus_z[1] = -1;
  CyclotomicInteger want(5);
  want[0] = 1;
  want[2] = -1;
  CHECK(cyclo_mul(cyclo_add(one, z), cyclo_add(one, minus_z)) == want);

  CHECK(cyclo_conj(z) == CyclotomicInteger::zeta_power(5, 24));
  CHECK(cyclo_conj(one) == one);
  CHECK_THROWS(cyclo_mul(one, CyclotomicInteger::constant(3, 1)));

  std::mt19937_64 rng(7);
  for (std::uint32_t ell : {3u, 5u, 7u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_element(ell, rng);
      const auto y = random_element(ell, rng);
      const auto w = random_element(ell, rng);
      CHECK(cyclo_conj(cyclo_conj(x)) == x);
      CHECK(cyclo_reduce(cyclo_reduce(x)) == cyclo_reduce(x));
      CHECK(cyclo_equal(cyclo_mul(x, y), cyclo_mul(y, x)));
      CHECK(cyclo_equal(cyclo_mul(cyclo_mul(x, y), w), cyclo_mul(x, cyclo_mul(y, w))));
      CHECK(cyclo_trace(x) == cyclo_trace(cyclo_reduce(x)));
      // Galois conjugates share the trace.
      CHECK(cyclo_trace(cyclo_galois(x, 2)) == cyclo_trace(x));
    }
  }
}

TEST_CASE("cyclotomic trace") {
  CHECK(cyclo_trace(CyclotomicInteger::constant(3, 1)) == 6);
  CHECK(cyclo_trace(CyclotomicInteger::zeta_power(3, 1)) == 0);
  const auto x =
      cyclo_add(CyclotomicInteger::zeta_power(3, 3), CyclotomicInteger::zeta_power(3, 6));
  CHECK(cyclo_trace(x) == -6);
}
