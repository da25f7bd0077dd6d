#pragma once

// Prime-field helpers and exact arithmetic in Z[zeta] for zeta a primitive
// l^2-th root of unity.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace stcurves {

bool is_prime(std::uint64_t n);
bool is_odd_prime(std::uint64_t n);

/// Euler's totient of l^2 for prime l.
constexpr std::uint32_t totient_of_square(std::uint32_t ell) { return ell * (ell - 1); }

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

/// Multiplicative order of a modulo m; requires gcd(a, m) = 1.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m);

/// Smallest generator of F_q^*. Throws std::invalid_argument for non-prime q.
std::uint64_t primitive_root(std::uint64_t q);

/// Largest prime accepted by table-based O(q)-memory routines.
inline constexpr std::uint64_t kDefaultMemoryGuard = std::uint64_t{1} << 26;

/// Discrete logarithms of all of F_q^* with respect to a fixed generator.
class DlogTable {
 public:
  /// Uses the smallest primitive root.
  explicit DlogTable(std::uint64_t q, std::uint64_t guard = kDefaultMemoryGuard);
  /// Uses `root`, which must generate F_q^*.
  DlogTable(std::uint64_t q, std::uint64_t root, std::uint64_t guard);

  std::uint64_t q() const { return q_; }
  std::uint64_t root() const { return root_; }

  /// t with root^t = x (mod q), 1 <= x < q.
  std::uint32_t operator[](std::uint64_t x) const { return index_[x]; }
  std::uint32_t at(std::uint64_t x) const;

  /// index[0] is unused and holds 0.
  std::span<const std::uint32_t> raw() const { return index_; }

 private:
  void fill();

  std::uint64_t q_;
  std::uint64_t root_;
  std::vector<std::uint32_t> index_;
};

DlogTable dlog_table(std::uint64_t q, std::uint64_t guard = kDefaultMemoryGuard);

/// Discrete logarithms reduced modulo a small m dividing q - 1, one byte per
/// field element. Enough to evaluate every character of order dividing m.
class ResidueIndexTable {
 public:
  ResidueIndexTable(std::uint64_t q, std::uint32_t modulus,
                    std::uint64_t guard = kDefaultMemoryGuard);
  /// Reduction of an existing full table.
  ResidueIndexTable(const DlogTable& table, std::uint32_t modulus);

  std::uint64_t q() const { return q_; }
  std::uint64_t root() const { return root_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint8_t operator[](std::uint64_t x) const { return index_[x]; }
  std::span<const std::uint8_t> raw() const { return index_; }

 private:
  std::uint64_t q_;
  std::uint64_t root_;
  std::uint32_t modulus_;
  std::vector<std::uint8_t> index_;
};

/// Element of Z[zeta], zeta^(l^2) = 1, stored as l^2 coefficients over
/// zeta^0..zeta^(l^2-1). The representation is redundant; compare through
/// `cyclo_reduce`.
class CyclotomicInteger {
 public:
  explicit CyclotomicInteger(std::uint32_t ell);
  CyclotomicInteger(std::uint32_t ell, std::vector<mpz_class> coeffs);

  static CyclotomicInteger constant(std::uint32_t ell, const mpz_class& c);
  static CyclotomicInteger zeta_power(std::uint32_t ell, std::uint32_t k);

  std::uint32_t ell() const { return ell_; }
  std::uint32_t level() const { return ell_ * ell_; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  const mpz_class& operator[](std::size_t k) const { return coeffs_[k]; }
  mpz_class& operator[](std::size_t k) { return coeffs_[k]; }

  /// True when every coefficient at or above phi(l^2) is zero.
  bool is_canonical() const;

  /// Structural equality of the stored coefficients; not ring equality.
  bool operator==(const CyclotomicInteger&) const = default;

  std::string to_string() const;

 private:
  std::uint32_t ell_;
  std::vector<mpz_class> coeffs_;
};

/// Sum of zeta^(k s) over s in (Z/l^2)^*: phi(l^2), -l or 0.
long trace_of_zeta_power(std::uint32_t k, std::uint32_t ell);

/// Remainder modulo the l^2-th cyclotomic polynomial sum_{i<l} x^(i l).
CyclotomicInteger cyclo_reduce(const CyclotomicInteger& x);
CyclotomicInteger cyclo_mul(const CyclotomicInteger& x, const CyclotomicInteger& y);
CyclotomicInteger cyclo_add(const CyclotomicInteger& x, const CyclotomicInteger& y);
/// zeta -> zeta^-1.
CyclotomicInteger cyclo_conj(const CyclotomicInteger& x);
/// zeta -> zeta^s for s a unit mod l^2.
CyclotomicInteger cyclo_galois(const CyclotomicInteger& x, std::uint32_t s);
/// Trace down to Q; exact and invariant under reduction.
mpz_class cyclo_trace(const CyclotomicInteger& x);

/// Ring equality, i.e. equality after canonical reduction.
bool cyclo_equal(const CyclotomicInteger& x, const CyclotomicInteger& y);

}  // namespace stcurves
