#pragma once

// Moment statistics of the Sato-Tate group <U(1)^g, gamma>.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "stcurves/stgroup.hpp"

namespace stcurves {

/// E[(u + conj u)^n] for u Haar on U(1): C(n, n/2) for even n, else 0.
mpz_class u1_moment(std::uint32_t n);

/// n-th moment of a_1 on the identity component U(1)^g, computed by summing
/// over partitions of n into at most g even parts.
mpz_class exact_a1_moment_component0(std::uint32_t ell, std::uint32_t n);

/// Full-group moment: the identity-component moment averaged over all
/// l(l-1) components (the others contribute 0).
mpq_class exact_a1_moment(std::uint32_t ell, std::uint32_t n);

struct MomentEstimate {
  double value;
  std::optional<double> std_error;
};

using MomentValue = std::variant<mpq_class, MomentEstimate>;

/// Moments M_n of the coefficient a_k, keyed by n.
struct MomentTable {
  std::uint32_t coefficient = 1;
  std::map<std::uint32_t, MomentValue> moments;
};

MomentTable exact_a1_moments(std::uint32_t ell, std::uint32_t n_max);

/// U = diag(u_0, conj u_0, ..., u_{g-1}, conj u_{g-1}), u_j = exp(i angle_j).
struct DiagonalUnitary {
  std::vector<double> angles;

  std::size_t genus() const { return angles.size(); }
  std::complex<double> u(std::size_t j) const { return std::polar(1.0, angles[j]); }
};

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; stable across standard libraries.
double uniform01(Rng& rng);

/// Haar sample on U(1)^g: g independent angles uniform on [0, 2 pi).
DiagonalUnitary sample_identity_component(std::uint32_t ell, Rng& rng);

/// det(T - M) = sum_k coeffs[k] T^(2g-k); coeffs[0] = 1 and a_k = coeffs[k].
struct Charpoly {
  std::vector<double> coeffs;
  /// max_k |Im a_k| / C(2g, k), measured before the imaginary parts are dropped.
  double max_imag = 0.0;

  double a(std::size_t k) const { return coeffs[k]; }
  /// max_k |a_k - a_{2g-k}| / C(2g, k).
  double palindrome_defect() const;
};

/// prod (T - lambda) by repeated multiplication by linear factors.
Charpoly charpoly_from_eigenvalues(std::span<const std::complex<double>> eigenvalues);

enum class CharpolyRoute {
  /// Factor through the cycles of the block permutation.
  cycle,
  /// Eigenvalues of the dense 2g x 2g complex matrix.
  dense,
};

/// Charpoly of U * m for a monomial block matrix m.
Charpoly charpoly_coeffs(const DiagonalUnitary& u, const BlockMatrix& m,
                         CharpolyRoute route = CharpolyRoute::cycle);

/// gamma together with its powers gamma^0 .. gamma^(l(l-1)-1).
class SatoTateGroup {
 public:
  explicit SatoTateGroup(std::uint32_t ell);
  SatoTateGroup(std::uint32_t ell, std::uint32_t generator);

  const CurveParams& params() const { return params_; }
  std::uint32_t generator() const { return generator_; }
  std::uint32_t component_count() const { return params_.component_count; }
  const BlockMatrix& gamma() const { return powers_.at(1); }
  const BlockMatrix& gamma_power(std::uint32_t i) const { return powers_.at(i); }

 private:
  CurveParams params_;
  std::uint32_t generator_;
  std::vector<BlockMatrix> powers_;
};

/// Charpoly of U * gamma^i. Component 0 uses the eigenvalues u_j, conj u_j
/// directly; other components follow `route`.
Charpoly charpoly_coeffs(const DiagonalUnitary& u, const SatoTateGroup& group,
                         std::uint32_t component, CharpolyRoute route = CharpolyRoute::cycle);

inline constexpr std::uint32_t kMaxMonteCarloGenus = 55;
inline constexpr std::uint64_t kMaxMonteCarloSamples = 1'000'000'000;

struct McOptions {
  /// Restrict to one component instead of drawing it uniformly.
  std::optional<std::uint32_t> component;
  CharpolyRoute route = CharpolyRoute::cycle;
  unsigned jobs = 1;
};

struct McDiagnostics {
  double max_imag = 0.0;
  double max_palindrome_defect = 0.0;
  /// Samples drawn from components other than the identity component.
  std::uint64_t nontrivial_samples = 0;
  /// Among those, how many had a_1 != 0.0 exactly.
  std::uint64_t nontrivial_nonzero_a1 = 0;
};

struct McResult {
  /// One table per k = 1..k_max, each with n = 1..n_max.
  std::vector<MomentTable> tables;
  McDiagnostics diagnostics;
};

/// Monte-Carlo moments of a_1..a_kmax. Samples are split into fixed-size
/// chunks, each with its own seed derived from (seed, chunk), so the result
/// depends only on (seed, samples) and not on the worker count.
McResult mc_moments(std::uint32_t ell, std::uint32_t k_max, std::uint32_t n_max,
                    std::uint64_t samples, std::uint64_t seed, const McOptions& options = {});

}  // namespace stcurves
