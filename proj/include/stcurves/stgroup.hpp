#pragma once

// Exponent calculus for the CM action of zeta_{l^2} on Jac(C_l) and the
// block-signed permutation gamma generating the Sato-Tate component group.
//
// Matrices are kept symbolic: every 2x2 block is a monomial of the form
//   diagonal(s, t) = s * diag(zeta^t, zeta^-t)
//   anti(s, t)     = s * [[0, zeta^t], [-zeta^-t, 0]]
// with s = +-1 and t mod l^2. I, -I, J, -J are the t = 0 cases, Z^t is
// diagonal(+1, t). Products of such blocks stay in this set, so all
// identities below are checked in exact integer arithmetic.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stcurves {

struct CurveParams {
  std::uint32_t ell;
  std::uint32_t genus;            // l(l-1)/2
  std::uint32_t modulus;          // l^2
  std::uint32_t component_count;  // phi(l^2) = 2 * genus

  /// Throws std::invalid_argument unless l is an odd prime.
  static CurveParams make(std::uint32_t ell);
};

/// The regular differential x^a dx / y^b.
struct OneForm {
  std::uint32_t a;
  std::uint32_t b;
  bool operator==(const OneForm&) const = default;
};

/// Basis ordered by a, then b.
std::vector<OneForm> one_form_basis(std::uint32_t ell);

struct ExponentData {
  CurveParams params;
  std::vector<OneForm> forms;
  /// e_j = <l(a_j + 1 - b_j) - b_j> mod l^2, in basis order.
  std::vector<std::uint32_t> e;
  /// The e_j, ascending.
  std::vector<std::uint32_t> set;

  bool contains(std::uint32_t t) const;
};

/// Builds the exponents and checks that S has g distinct units and meets
/// its negative trivially. A failed check throws std::logic_error.
ExponentData exponent_set(std::uint32_t ell);

struct GaloisTarget {
  std::uint32_t raw;       // g_i = <n e_i> mod l^2
  std::uint32_t exponent;  // the element of S shown in the block: g_i or l^2 - g_i
  bool conjugated;         // g_i not in S, block is conj(Z)^exponent
  bool operator==(const GaloisTarget&) const = default;
};

/// sigma_n acting on the diagonal of alpha.
struct GaloisAction {
  std::uint32_t ell;
  std::uint32_t n;
  std::vector<GaloisTarget> targets;
};

GaloisAction galois_action(std::uint32_t ell, std::uint32_t n);

/// Smallest generator of (Z/l^2)^*.
std::uint32_t default_generator(std::uint32_t ell);
bool generates_units(std::uint32_t ell, std::uint32_t n);

enum class BlockTag { zero, I, minus_I, J, minus_J };
std::string_view to_string(BlockTag tag);

struct Block {
  enum class Shape : std::uint8_t { zero, diagonal, anti };
  Shape shape = Shape::zero;
  std::int8_t sign = 1;
  std::uint32_t exponent = 0;

  static Block from_tag(BlockTag tag);
  static Block zeta_power(std::uint32_t t) { return {Shape::diagonal, 1, t}; }

  bool is_zero() const { return shape == Shape::zero; }
  /// Set when the block is one of 0, +-I, +-J.
  std::optional<BlockTag> tag() const;

  bool operator==(const Block&) const = default;
};

/// g x g grid of monomial blocks with exponents taken mod `modulus`.
class BlockMatrix {
 public:
  BlockMatrix(std::size_t size, std::uint32_t modulus);

  static BlockMatrix identity(std::size_t size, std::uint32_t modulus);
  /// Omega = diag(J, ..., J).
  static BlockMatrix symplectic_form(std::size_t size, std::uint32_t modulus);

  std::size_t size() const { return size_; }
  std::uint32_t modulus() const { return modulus_; }

  const Block& operator()(std::size_t i, std::size_t j) const { return blocks_[i * size_ + j]; }
  Block& operator()(std::size_t i, std::size_t j) { return blocks_[i * size_ + j]; }

  /// Exactly one nonzero block in every row and column.
  bool is_monomial() const;
  /// Monomial with every nonzero block in {+-I, +-J}.
  bool is_signed_permutation() const;
  /// All nonzero blocks on the diagonal and each equal to +-I.
  bool is_diagonal_sign() const;

  std::size_t nonzero_count() const;

  bool operator==(const BlockMatrix&) const = default;

 private:
  std::size_t size_;
  std::uint32_t modulus_;
  std::vector<Block> blocks_;
};

Block block_mul(const Block& x, const Block& y, std::uint32_t modulus);
Block block_inverse(const Block& x, std::uint32_t modulus);
Block block_transpose(const Block& x, std::uint32_t modulus);

/// gamma[i, j] = I if g_i = e_j, J if g_i = l^2 - e_j, else 0.
/// n only needs to be a unit; see generates_units.
BlockMatrix gamma_matrix(std::uint32_t ell, std::uint32_t n);
/// The inverse written out directly: I if g_j = e_i, -J if g_j = l^2 - e_i.
BlockMatrix gamma_inverse(std::uint32_t ell, std::uint32_t n);
/// diag(Z^e_0, ..., Z^e_{g-1}).
BlockMatrix alpha_matrix(const ExponentData& data);

/// Product of monomial block matrices. Throws if either factor is not monomial.
BlockMatrix block_compose(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix block_inverse(const BlockMatrix& a);
BlockMatrix block_transpose(const BlockMatrix& a);
BlockMatrix block_power(const BlockMatrix& a, std::uint64_t d);

struct ConjugatedAlpha {
  std::vector<std::uint32_t> exponents;
  std::vector<bool> conjugated;
};

/// Diagonal of gamma * diag(Z^e_j) * gamma^-1. A block reached through a J
/// entry of gamma is reported as conj(Z)^exponent. Throws std::logic_error
/// if the product is not block diagonal.
ConjugatedAlpha conjugate_alpha(const BlockMatrix& gamma, std::span<const std::uint32_t> e);

/// Same data as a GaloisAction, for index-by-index comparison.
bool matches(const ConjugatedAlpha& conj, const GaloisAction& action);

/// Smallest d > 0 with gamma^d block diagonal with +-I blocks.
std::uint64_t component_order(const BlockMatrix& gamma);
/// Smallest d > 0 with gamma^d equal to the identity.
std::uint64_t matrix_order(const BlockMatrix& gamma);

/// A^T Omega A == Omega, evaluated on the dense integer matrix. Requires all
/// blocks to be tags; the matrix need not be monomial.
bool is_symplectic(const BlockMatrix& a);

}  // namespace stcurves
