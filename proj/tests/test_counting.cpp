#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "stcurves/counting.hpp"

using namespace stcurves;

namespace {

// Value pinned from count_points_naive(3, 19) on its first correct run.
constexpr std::uint64_t kN19 = 14;

std::complex<double> embed(const CyclotomicInteger& x) {
  std::complex<double> z = 0.0;
  for (std::uint32_t k = 0; k < x.level(); ++k) {
    z += x[k].get_d() * std::polar(1.0, 2.0 * std::numbers::pi * k / x.level());
  }
  return z;
}

}  // namespace

TEST_CASE("naive counts") {
  CHECK(count_points_naive(3, 2).count == 3);
  CHECK(count_points_naive(3, 7).count == 8);
  CHECK(count_points_naive(3, 19).count == kN19);
  CHECK(count_points_naive(3, 19).method == CountMethod::naive);
  CHECK_THROWS(count_points_naive(3, 3));
  CHECK_THROWS(count_points_naive(3, 21));
}

TEST_CASE("congruence dispatch") {
  const auto r7 = count_points(5, 7);
  CHECK(r7.count == 8);
  CHECK(r7.method == CountMethod::lemma_congruence);
  const auto r11 = count_points(5, 11);
  CHECK(r11.count == 12);
  CHECK(r11.method == CountMethod::lemma_congruence);
  const auto r101 = count_points(5, 101);
  CHECK(r101.method == CountMethod::jacobi_trace);
  CHECK(r101.count == count_points_naive(5, 101).count);
  CHECK(count_points(3, 2).count == 3);
  CHECK_THROWS(count_points(5, 5));

  CHECK(normalized_a1(5, 7) == 0.0);
  CHECK(normalized_a1(5, 11) == 0.0);
  CHECK(normalized_a1(3, 19) == doctest::Approx((20.0 - kN19) / std::sqrt(19.0)));
}

TEST_CASE("jacobi sums") {
  SUBCASE("norm is q") {
    const auto j = jacobi_sum(19, 3, 6, 1);
    CHECK(cyclo_equal(cyclo_mul(j, cyclo_conj(j)), CyclotomicInteger::constant(3, 19)));
  }
  SUBCASE("numeric modulus") {
    CHECK(std::abs(std::abs(embed(jacobi_sum(19, 3, 1, 1))) - std::sqrt(19.0)) < 1e-9);
  }
  SUBCASE("trace gives the count") {
    CHECK(jacobi_trace(19, 3, 6, 1) == mpz_class(std::int64_t(kN19) - 20));
    CHECK(cyclo_trace(jacobi_sum(101, 5, 20, 1)) ==
          mpz_class(std::int64_t(count_points_naive(5, 101).count) - 102));
  }
  SUBCASE("independent of the primitive root") {
    for (std::uint64_t q : {19ull, 37ull, 109ull}) {
      const DlogTable smallest(q);
      for (std::uint64_t g = 2; g < q; ++g) {
        if (multiplicative_order(g, q) != q - 1) continue;
        const DlogTable other(q, g, kDefaultMemoryGuard);
        CHECK(jacobi_trace(other, 3, 6, 1) == jacobi_trace(smallest, 3, 6, 1));
      }
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS(jacobi_sum(23, 3, 6, 1));
    CHECK_THROWS(jacobi_sum(19, 3, 0, 1));
    CHECK_THROWS(jacobi_sum(19, 3, 6, 9));
  }
}

TEST_CASE("weil bound and jacobi identity") {
  for (std::uint32_t ell : {3u, 5u}) {
    const std::uint64_t level = ell * ell;
    for (std::uint64_t q = 2; q < 1200; ++q) {
      if (!is_prime(q) || q == ell) continue;
      const auto r = count_points(ell, q);
      CHECK(satisfies_weil_bound(ell, q, r.count));
      if (q % level == 1) {
        CHECK(jacobi_trace(q, ell, ell * (ell - 1), 1) ==
              mpz_class(std::int64_t(r.count) - std::int64_t(q) - 1));
      }
    }
  }
  CHECK_FALSE(satisfies_weil_bound(3, 7, 100));
}
