#include "stcurves/counting.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace stcurves {

namespace {

void check_good_reduction(std::uint32_t ell, std::uint64_t q) {
  if (!is_odd_prime(ell)) throw std::invalid_argument("l must be an odd prime");
  if (!is_prime(q)) throw std::invalid_argument("q = " + std::to_string(q) + " is not prime");
  if (q == ell) {
    throw std::invalid_argument("q = l = " + std::to_string(q) + " is a prime of bad reduction");
  }
}

}  // namespace

std::string_view to_string(CountMethod m) {
  switch (m) {
    case CountMethod::naive: return "naive";
    case CountMethod::lemma_congruence: return "lemma_congruence";
    case CountMethod::jacobi_trace: return "jacobi_trace";
  }
  return "unknown";
}

bool satisfies_weil_bound(std::uint32_t ell, std::uint64_t q, std::uint64_t count) {
  const std::uint64_t genus = std::uint64_t{ell} * (ell - 1) / 2;
  const __int128 dev = static_cast<__int128>(count) - static_cast<__int128>(q) - 1;
  return dev * dev <= static_cast<__int128>(4 * genus * genus) * q;
}

PointCountRecord count_points_naive(std::uint32_t ell, std::uint64_t q, std::uint64_t guard) {
  check_good_reduction(ell, q);
  if (q > guard) {
    throw std::length_error("count_points_naive: q exceeds memory guard " + std::to_string(guard));
  }
  // roots[c] = #{y : y^l = c}
  std::vector<std::uint8_t> roots(q, 0);
  for (std::uint64_t y = 0; y < q; ++y) ++roots[pow_mod(y, ell, q)];

  std::uint64_t affine = 0;
  for (std::uint64_t x = 0; x < q; ++x) {
    const std::uint64_t xl = pow_mod(x, ell, q);
    const std::uint64_t rhs = x * ((xl + q - 1) % q) % q;
    affine += roots[rhs];
  }
  return {ell, q, affine + 1, CountMethod::naive};
}

CyclotomicInteger jacobi_sum(const ResidueIndexTable& table, std::uint32_t ell, std::uint32_t a,
                             std::uint32_t b) {
  if (!is_odd_prime(ell)) throw std::invalid_argument("jacobi_sum: l must be an odd prime");
  const std::uint32_t level = ell * ell;
  const std::uint64_t q = table.q();
  if ((q - 1) % level != 0) {
    throw std::invalid_argument("jacobi_sum: q = " + std::to_string(q) + " is not 1 mod l^2");
  }
  if (table.modulus() != level) {
    throw std::invalid_argument("jacobi_sum: index table is not reduced modulo l^2");
  }
  a %= level;
  b %= level;
  if (a == 0 || b == 0) {
    throw std::invalid_argument("jacobi_sum: a and b must be nonzero mod l^2");
  }

  std::array<std::uint8_t, 256> scaled_a{};
  std::array<std::uint8_t, 256> scaled_b{};
  for (std::uint32_t r = 0; r < level; ++r) {
    scaled_a[r] = static_cast<std::uint8_t>(a * r % level);
    scaled_b[r] = static_cast<std::uint8_t>(b * r % level);
  }

  // x = 0 and x = 1 contribute nothing since chi^a(0) = chi^b(0) = 0.
  std::vector<std::int64_t> counts(level, 0);
  const auto index = table.raw();
  for (std::uint64_t x = 2; x < q; ++x) {
    std::uint32_t e = std::uint32_t{scaled_a[index[x]]} + scaled_b[index[q + 1 - x]];
    if (e >= level) e -= level;
    ++counts[e];
  }

  std::vector<mpz_class> coeffs(level);
  for (std::uint32_t k = 0; k < level; ++k) coeffs[k] = static_cast<long>(counts[k]);
  return CyclotomicInteger(ell, std::move(coeffs));
}

CyclotomicInteger jacobi_sum(const DlogTable& table, std::uint32_t ell, std::uint32_t a,
                             std::uint32_t b) {
  if (!is_odd_prime(ell)) throw std::invalid_argument("jacobi_sum: l must be an odd prime");
  const std::uint32_t level = ell * ell;
  if ((table.q() - 1) % level != 0) {
    throw std::invalid_argument("jacobi_sum: q = " + std::to_string(table.q()) +
                                " is not 1 mod l^2");
  }
  return jacobi_sum(ResidueIndexTable(table, level), ell, a, b);
}

CyclotomicInteger jacobi_sum(std::uint64_t q, std::uint32_t ell, std::uint32_t a,
                             std::uint32_t b) {
  if (!is_odd_prime(ell)) throw std::invalid_argument("jacobi_sum: l must be an odd prime");
  if (!is_prime(q) || (q - 1) % (std::uint64_t{ell} * ell) != 0) {
    throw std::invalid_argument("jacobi_sum: q = " + std::to_string(q) + " is not a prime 1 mod l^2");
  }
  return jacobi_sum(ResidueIndexTable(q, ell * ell), ell, a, b);
}

mpz_class jacobi_trace(const ResidueIndexTable& table, std::uint32_t ell, std::uint32_t a,
                       std::uint32_t b) {
  return cyclo_trace(jacobi_sum(table, ell, a, b));
}

mpz_class jacobi_trace(const DlogTable& table, std::uint32_t ell, std::uint32_t a,
                       std::uint32_t b) {
  return cyclo_trace(jacobi_sum(table, ell, a, b));
}

mpz_class jacobi_trace(std::uint64_t q, std::uint32_t ell, std::uint32_t a, std::uint32_t b) {
  return cyclo_trace(jacobi_sum(q, ell, a, b));
}

PointCountRecord count_points(std::uint32_t ell, std::uint64_t q, std::uint64_t guard) {
  check_good_reduction(ell, q);
  const std::uint64_t level = std::uint64_t{ell} * ell;
  if ((q - 1) % ell != 0 || (q - 1) % level != 0) {
    return {ell, q, q + 1, CountMethod::lemma_congruence};
  }
  const ResidueIndexTable table(q, ell * ell, guard);
  const mpz_class trace = jacobi_trace(table, ell, ell * (ell - 1), 1);
  const mpz_class total = mpz_class(static_cast<unsigned long>(q + 1)) + trace;
  if (total < 0 || !total.fits_ulong_p()) throw std::logic_error("count_points: count out of range");
  PointCountRecord rec{ell, q, total.get_ui(), CountMethod::jacobi_trace};
  if (!satisfies_weil_bound(ell, q, rec.count)) {
    throw std::logic_error("count_points: Weil bound violated at q = " + std::to_string(q));
  }
  return rec;
}

double normalized_trace(std::uint64_t q, std::uint64_t count) {
  const double dev = static_cast<double>(static_cast<std::int64_t>(q + 1) -
                                         static_cast<std::int64_t>(count));
  return dev / std::sqrt(static_cast<double>(q));
}

double normalized_a1(std::uint32_t ell, std::uint64_t q) {
  return normalized_trace(q, count_points(ell, q).count);
}

}  // namespace stcurves
