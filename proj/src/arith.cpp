#include "stcurves/arith.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace stcurves {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  std::uint64_t result = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, mod);
    base = mul_mod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_odd_prime(std::uint64_t n) { return n != 2 && is_prime(n); }

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
  if (m == 0 || std::gcd(a % m, m) != 1) {
    throw std::invalid_argument("multiplicative_order: argument is not a unit");
  }
  if (m == 1) return 1;
  // Order divides the group exponent; lambda(m) | phi(m), so start from phi.
  std::uint64_t phi = m;
  for (auto p : distinct_prime_factors(m)) phi = phi / p * (p - 1);
  std::uint64_t order = phi;
  for (auto p : distinct_prime_factors(phi)) {
    while (order % p == 0 && pow_mod(a, order / p, m) == 1) order /= p;
  }
  return order;
}

std::uint64_t primitive_root(std::uint64_t q) {
  if (!is_prime(q)) {
    throw std::invalid_argument("primitive_root: " + std::to_string(q) + " is not prime");
  }
  if (q == 2) return 1;
  const auto factors = distinct_prime_factors(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool generator = true;
    for (auto p : factors) {
      if (pow_mod(g, (q - 1) / p, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::logic_error("primitive_root: no generator found");
}

DlogTable::DlogTable(std::uint64_t q, std::uint64_t guard) : q_(q), root_(0) {
  if (!is_prime(q)) {
    throw std::invalid_argument("dlog_table: " + std::to_string(q) + " is not prime");
  }
  if (q > guard) {
    throw std::length_error("dlog_table: q = " + std::to_string(q) + " exceeds memory guard " +
                            std::to_string(guard));
  }
  root_ = primitive_root(q);
  fill();
}

DlogTable::DlogTable(std::uint64_t q, std::uint64_t root, std::uint64_t guard)
    : q_(q), root_(root) {
  if (!is_prime(q)) {
    throw std::invalid_argument("dlog_table: " + std::to_string(q) + " is not prime");
  }
  if (q > guard) {
    throw std::length_error("dlog_table: q = " + std::to_string(q) + " exceeds memory guard " +
                            std::to_string(guard));
  }
  if (root % q == 0 || multiplicative_order(root % q, q) != q - 1) {
    throw std::invalid_argument("dlog_table: " + std::to_string(root) +
                                " does not generate F_" + std::to_string(q) + "^*");
  }
  root_ = root % q;
  fill();
}

void DlogTable::fill() {
  index_.assign(q_, 0);
  std::uint64_t x = 1;
  for (std::uint64_t t = 0; t + 1 < q_; ++t) {
    index_[x] = static_cast<std::uint32_t>(t);
    x = x * root_ % q_;
  }
}

std::uint32_t DlogTable::at(std::uint64_t x) const {
  if (x == 0 || x >= q_) throw std::out_of_range("DlogTable::at: argument outside F_q^*");
  return index_[x];
}

DlogTable dlog_table(std::uint64_t q, std::uint64_t guard) { return DlogTable(q, guard); }

ResidueIndexTable::ResidueIndexTable(std::uint64_t q, std::uint32_t modulus, std::uint64_t guard)
    : q_(q), root_(0), modulus_(modulus) {
  if (!is_prime(q)) {
    throw std::invalid_argument("residue_index_table: " + std::to_string(q) + " is not prime");
  }
  if (q > guard) {
    throw std::length_error("residue_index_table: q = " + std::to_string(q) +
                            " exceeds memory guard " + std::to_string(guard));
  }
  if (modulus == 0 || modulus > 256 || (q - 1) % modulus != 0) {
    throw std::invalid_argument("residue_index_table: modulus must divide q - 1 and be <= 256");
  }
  root_ = primitive_root(q);
  index_.assign(q, 0);
  // q < 2^32 here, so x * root fits in 64 bits and the double quotient
  // estimate is off by at most one.
  const double inv_q = 1.0 / static_cast<double>(q);
  const std::uint64_t n = q - 1;
  std::uint64_t x = 1;
  std::uint32_t r = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    index_[x] = static_cast<std::uint8_t>(r);
    if (++r == modulus) r = 0;
    const std::uint64_t prod = x * root_;
    std::int64_t rem = static_cast<std::int64_t>(
        prod - static_cast<std::uint64_t>(static_cast<double>(prod) * inv_q) * q);
    if (rem < 0) rem += static_cast<std::int64_t>(q);
    else if (rem >= static_cast<std::int64_t>(q)) rem -= static_cast<std::int64_t>(q);
    x = static_cast<std::uint64_t>(rem);
  }
}

ResidueIndexTable::ResidueIndexTable(const DlogTable& table, std::uint32_t modulus)
    : q_(table.q()), root_(table.root()), modulus_(modulus) {
  if (modulus == 0 || modulus > 256 || (q_ - 1) % modulus != 0) {
    throw std::invalid_argument("residue_index_table: modulus must divide q - 1 and be <= 256");
  }
  index_.resize(q_);
  const auto full = table.raw();
  for (std::uint64_t x = 0; x < q_; ++x) index_[x] = static_cast<std::uint8_t>(full[x] % modulus);
}

CyclotomicInteger::CyclotomicInteger(std::uint32_t ell) : ell_(ell), coeffs_(ell * ell) {
  if (!is_odd_prime(ell)) throw std::invalid_argument("CyclotomicInteger: l must be an odd prime");
}

CyclotomicInteger::CyclotomicInteger(std::uint32_t ell, std::vector<mpz_class> coeffs)
    : ell_(ell), coeffs_(std::move(coeffs)) {
  if (!is_odd_prime(ell)) throw std::invalid_argument("CyclotomicInteger: l must be an odd prime");
  if (coeffs_.size() != std::size_t{ell} * ell) {
    throw std::invalid_argument("CyclotomicInteger: expected l^2 coefficients");
  }
}

CyclotomicInteger CyclotomicInteger::constant(std::uint32_t ell, const mpz_class& c) {
  CyclotomicInteger x(ell);
  x.coeffs_[0] = c;
  return x;
}

CyclotomicInteger CyclotomicInteger::zeta_power(std::uint32_t ell, std::uint32_t k) {
  CyclotomicInteger x(ell);
  x.coeffs_[k % x.level()] = 1;
  return x;
}

bool CyclotomicInteger::is_canonical() const {
  for (std::size_t k = totient_of_square(ell_); k < coeffs_.size(); ++k) {
    if (coeffs_[k] != 0) return false;
  }
  return true;
}

std::string CyclotomicInteger::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << (coeffs_[k] < 0 ? " - " : " + ");
    else if (coeffs_[k] < 0) os << "-";
    mpz_class mag = abs(coeffs_[k]);
    if (k == 0) {
      os << mag;
    } else {
      if (mag != 1) os << mag << "*";
      os << "z^" << k;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

long trace_of_zeta_power(std::uint32_t k, std::uint32_t ell) {
  const std::uint32_t level = ell * ell;
  if (k >= level) throw std::out_of_range("trace_of_zeta_power: k must be below l^2");
  if (k == 0) return static_cast<long>(totient_of_square(ell));
  if (k % ell == 0) return -static_cast<long>(ell);
  return 0;
}

CyclotomicInteger cyclo_reduce(const CyclotomicInteger& x) {
  CyclotomicInteger r = x;
  const std::uint32_t ell = x.ell();
  const std::uint32_t phi = totient_of_square(ell);
  // zeta^phi = -(1 + zeta^l + ... + zeta^((l-2) l))
  for (std::uint32_t k = x.level() - 1; k >= phi; --k) {
    if (r[k] == 0) continue;
    const mpz_class c = r[k];
    r[k] = 0;
    for (std::uint32_t i = 0; i + 1 < ell; ++i) r[k - phi + i * ell] -= c;
  }
  return r;
}

CyclotomicInteger cyclo_mul(const CyclotomicInteger& x, const CyclotomicInteger& y) {
  if (x.ell() != y.ell()) throw std::invalid_argument("cyclo_mul: level mismatch");
  const std::uint32_t level = x.level();
  CyclotomicInteger r(x.ell());
  for (std::uint32_t i = 0; i < level; ++i) {
    if (x[i] == 0) continue;
    for (std::uint32_t j = 0; j < level; ++j) {
      if (y[j] == 0) continue;
      r[(i + j) % level] += x[i] * y[j];
    }
  }
  return r;
}

CyclotomicInteger cyclo_add(const CyclotomicInteger& x, const CyclotomicInteger& y) {
  if (x.ell() != y.ell()) throw std::invalid_argument("cyclo_add: level mismatch");
  CyclotomicInteger r = x;
  for (std::uint32_t k = 0; k < x.level(); ++k) r[k] += y[k];
  return r;
}

CyclotomicInteger cyclo_conj(const CyclotomicInteger& x) {
  const std::uint32_t level = x.level();
  CyclotomicInteger r(x.ell());
  for (std::uint32_t k = 0; k < level; ++k) r[(level - k) % level] = x[k];
  return r;
}

CyclotomicInteger cyclo_galois(const CyclotomicInteger& x, std::uint32_t s) {
  const std::uint32_t level = x.level();
  if (s % x.ell() == 0) throw std::invalid_argument("cyclo_galois: s is not a unit mod l^2");
  CyclotomicInteger r(x.ell());
  for (std::uint32_t k = 0; k < level; ++k) {
    r[static_cast<std::uint32_t>(std::uint64_t{k} * s % level)] += x[k];
  }
  return r;
}

mpz_class cyclo_trace(const CyclotomicInteger& x) {
  mpz_class t = 0;
  for (std::uint32_t k = 0; k < x.level(); ++k) {
    if (x[k] != 0) t += x[k] * trace_of_zeta_power(k, x.ell());
  }
  return t;
}

bool cyclo_equal(const CyclotomicInteger& x, const CyclotomicInteger& y) {
  if (x.ell() != y.ell()) return false;
  return cyclo_reduce(x) == cyclo_reduce(y);
}

}  // namespace stcurves
