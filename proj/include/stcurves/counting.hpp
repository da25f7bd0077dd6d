#pragma once

// Point counts on C_l : y^l = x (x^l - 1) over prime fields.

#include <cstdint>
#include <string_view>

#include "stcurves/arith.hpp"

namespace stcurves {

enum class CountMethod { naive, lemma_congruence, jacobi_trace };

std::string_view to_string(CountMethod m);

/// Projective point count #C_l(F_q), including the single point at infinity.
struct PointCountRecord {
  std::uint32_t ell;
  std::uint64_t q;
  std::uint64_t count;
  CountMethod method;
};

/// |count - q - 1| <= 2 g sqrt(q), checked in integers.
bool satisfies_weil_bound(std::uint32_t ell, std::uint64_t q, std::uint64_t count);

/// Power-count enumeration. Brute force; serves as the reference count.
PointCountRecord count_points_naive(std::uint32_t ell, std::uint64_t q,
                                    std::uint64_t guard = kDefaultMemoryGuard);

/// J_q(a, b) = sum_x chi^a(x) chi^b(1 - x) with chi(root^t) = zeta^t.
/// Requires q = 1 mod l^2 and a, b nonzero mod l^2.
CyclotomicInteger jacobi_sum(const ResidueIndexTable& table, std::uint32_t ell, std::uint32_t a,
                             std::uint32_t b);
CyclotomicInteger jacobi_sum(const DlogTable& table, std::uint32_t ell, std::uint32_t a,
                             std::uint32_t b);
CyclotomicInteger jacobi_sum(std::uint64_t q, std::uint32_t ell, std::uint32_t a, std::uint32_t b);

mpz_class jacobi_trace(const ResidueIndexTable& table, std::uint32_t ell, std::uint32_t a,
                       std::uint32_t b);
mpz_class jacobi_trace(const DlogTable& table, std::uint32_t ell, std::uint32_t a,
                       std::uint32_t b);
mpz_class jacobi_trace(std::uint64_t q, std::uint32_t ell, std::uint32_t a, std::uint32_t b);

/// Dispatches on q mod l and q mod l^2; only q = 1 mod l^2 touches the field.
PointCountRecord count_points(std::uint32_t ell, std::uint64_t q,
                              std::uint64_t guard = kDefaultMemoryGuard);

/// (q + 1 - count) / sqrt(q): the normalized Frobenius trace for a known count.
double normalized_trace(std::uint64_t q, std::uint64_t count);

/// normalized_trace of count_points(l, q).
double normalized_a1(std::uint32_t ell, std::uint64_t q);

}  // namespace stcurves
