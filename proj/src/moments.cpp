#include "stcurves/moments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "stcurves/arith.hpp"

namespace stcurves {

namespace {

using cplx = std::complex<double>;

mpz_class factorial(std::uint32_t n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// Partitions of `remaining` into non-increasing parts <= max_part, at most
// `slots` parts. parts[i] = m means the index carries exponent 2m.
void sum_over_partitions(std::uint32_t remaining, std::uint32_t max_part, std::uint32_t slots,
                         std::vector<std::uint32_t>& parts, std::uint32_t genus,
                         std::uint32_t n, mpz_class& total) {
  if (remaining == 0) {
    // n! / prod (m_i!)^2 counts the multinomial weight times prod C(2m_i, m_i);
    // genus! / (genus - k)! / prod mult! counts the index assignments.
    mpz_class term = factorial(n);
    for (auto m : parts) {
      const mpz_class f = factorial(m);
      term /= f * f;
    }
    const auto k = static_cast<std::uint32_t>(parts.size());
    for (std::uint32_t i = 0; i < k; ++i) term *= genus - i;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= parts.size(); ++i) {
      if (i < parts.size() && parts[i] == parts[i - 1]) {
        ++run;
      } else {
        term /= factorial(static_cast<std::uint32_t>(run));
        run = 1;
      }
    }
    total += term;
    return;
  }
  if (slots == 0) return;
  for (std::uint32_t m = std::min(remaining, max_part); m >= 1; --m) {
    parts.push_back(m);
    sum_over_partitions(remaining - m, m, slots - 1, parts, genus, n, total);
    parts.pop_back();
  }
}

std::vector<cplx> poly_mul(const std::vector<cplx>& p, const std::vector<cplx>& q) {
  std::vector<cplx> r(p.size() + q.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

Charpoly to_charpoly(const std::vector<cplx>& c) {
  Charpoly out;
  out.coeffs.reserve(c.size());
  const std::size_t degree = c.size() - 1;
  double scale = 1.0;  // C(degree, k)
  for (std::size_t k = 0; k < c.size(); ++k) {
    out.coeffs.push_back(c[k].real());
    out.max_imag = std::max(out.max_imag, std::abs(c[k].imag()) / scale);
    scale = scale * double(degree - k) / double(k + 1);
  }
  return out;
}

using Mat2 = std::array<cplx, 4>;

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

Mat2 block_value(const Block& b, std::uint32_t modulus) {
  if (b.is_zero()) return {};
  const double s = b.sign;
  const cplx z = b.exponent == 0
                     ? cplx{1.0, 0.0}
                     : std::polar(1.0, 2.0 * std::numbers::pi * b.exponent / modulus);
  if (b.shape == Block::Shape::diagonal) return {s * z, 0.0, 0.0, s * std::conj(z)};
  return {0.0, s * z, -s * std::conj(z), 0.0};
}

struct CycleStep {
  std::size_t row;
  Mat2 block;
};

// Cycles of the block permutation underlying a monomial matrix.
std::vector<std::vector<CycleStep>> cycles_of(const BlockMatrix& m) {
  if (!m.is_monomial()) throw std::invalid_argument("charpoly: matrix is not monomial");
  const std::size_t n = m.size();
  std::vector<std::size_t> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!m(i, j).is_zero()) next[i] = j;
    }
  }
  std::vector<bool> seen(n, false);
  std::vector<std::vector<CycleStep>> cycles;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<CycleStep> cycle;
    for (std::size_t i = start; !seen[i]; i = next[i]) {
      seen[i] = true;
      cycle.push_back({i, block_value(m(i, next[i]), m.modulus())});
    }
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

// A cycle i_0 -> ... -> i_{L-1} of blocks B_i contributes
// det(T^L - B_{i_0} ... B_{i_{L-1}}), where each B_i already includes U's factor.
Charpoly charpoly_by_cycles(const DiagonalUnitary& u,
                            const std::vector<std::vector<CycleStep>>& cycles) {
  std::vector<cplx> poly{cplx{1.0, 0.0}};
  for (const auto& cycle : cycles) {
    Mat2 prod{1.0, 0.0, 0.0, 1.0};
    for (const auto& step : cycle) {
      const cplx w = u.u(step.row);
      const Mat2 scaled{w * step.block[0], w * step.block[1], std::conj(w) * step.block[2],
                        std::conj(w) * step.block[3]};
      prod = mat2_mul(prod, scaled);
    }
    const std::size_t len = cycle.size();
    std::vector<cplx> factor(2 * len + 1, cplx{0.0, 0.0});
    factor[0] = 1.0;
    factor[len] = -(prod[0] + prod[3]);
    factor[2 * len] = prod[0] * prod[3] - prod[1] * prod[2];
    poly = poly_mul(poly, factor);
  }
  return to_charpoly(poly);
}

Charpoly charpoly_dense(const DiagonalUnitary& u, const BlockMatrix& m) {
  const std::size_t g = m.size();
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    const cplx w = u.u(i);
    for (std::size_t j = 0; j < g; ++j) {
      if (m(i, j).is_zero()) continue;
      const Mat2 b = block_value(m(i, j), m.modulus());
      dense(2 * i, 2 * j) = w * b[0];
      dense(2 * i, 2 * j + 1) = w * b[1];
      dense(2 * i + 1, 2 * j) = std::conj(w) * b[2];
      dense(2 * i + 1, 2 * j + 1) = std::conj(w) * b[3];
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("charpoly: eigensolver failed");
  const Eigen::VectorXcd ev = solver.eigenvalues();
  std::vector<cplx> values(ev.data(), ev.data() + ev.size());
  return charpoly_from_eigenvalues(values);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

mpz_class u1_moment(std::uint32_t n) {
  if (n % 2 != 0) return 0;
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), n, n / 2);
  return c;
}

mpz_class exact_a1_moment_component0(std::uint32_t ell, std::uint32_t n) {
  const auto params = CurveParams::make(ell);
  if (n % 2 != 0) return 0;
  if (n == 0) return 1;
  mpz_class total = 0;
  std::vector<std::uint32_t> parts;
  sum_over_partitions(n / 2, n / 2, params.genus, parts, params.genus, n, total);
  return total;
}

mpq_class exact_a1_moment(std::uint32_t ell, std::uint32_t n) {
  const auto params = CurveParams::make(ell);
  mpq_class m(exact_a1_moment_component0(ell, n), mpz_class(params.component_count));
  m.canonicalize();
  return m;
}

MomentTable exact_a1_moments(std::uint32_t ell, std::uint32_t n_max) {
  MomentTable table;
  table.coefficient = 1;
  for (std::uint32_t n = 1; n <= n_max; ++n) table.moments.emplace(n, exact_a1_moment(ell, n));
  return table;
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

DiagonalUnitary sample_identity_component(std::uint32_t ell, Rng& rng) {
  const auto params = CurveParams::make(ell);
  DiagonalUnitary u;
  u.angles.resize(params.genus);
  for (auto& a : u.angles) a = 2.0 * std::numbers::pi * uniform01(rng);
  return u;
}

double Charpoly::palindrome_defect() const {
  const std::size_t deg = coeffs.size() - 1;
  double worst = 0.0;
  double binom = 1.0;
  for (std::size_t k = 0; k <= deg; ++k) {
    worst = std::max(worst, std::abs(coeffs[k] - coeffs[deg - k]) / binom);
    binom = binom * static_cast<double>(deg - k) / static_cast<double>(k + 1);
  }
  return worst;
}

Charpoly charpoly_from_eigenvalues(std::span<const std::complex<double>> eigenvalues) {
  std::vector<cplx> c(eigenvalues.size() + 1, cplx{0.0, 0.0});
  c[0] = 1.0;
  std::size_t deg = 0;
  for (const auto& lambda : eigenvalues) {
    ++deg;
    for (std::size_t k = deg; k >= 1; --k) c[k] -= lambda * c[k - 1];
  }
  return to_charpoly(c);
}

Charpoly charpoly_coeffs(const DiagonalUnitary& u, const BlockMatrix& m, CharpolyRoute route) {
  if (u.genus() != m.size()) throw std::invalid_argument("charpoly: genus mismatch");
  if (route == CharpolyRoute::dense) return charpoly_dense(u, m);
  return charpoly_by_cycles(u, cycles_of(m));
}

SatoTateGroup::SatoTateGroup(std::uint32_t ell) : SatoTateGroup(ell, default_generator(ell)) {}

SatoTateGroup::SatoTateGroup(std::uint32_t ell, std::uint32_t generator)
    : params_(CurveParams::make(ell)), generator_(generator) {
  if (!generates_units(ell, generator)) {
    throw std::invalid_argument("SatoTateGroup: " + std::to_string(generator) +
                                " does not generate (Z/l^2)^*");
  }
  const BlockMatrix gamma = gamma_matrix(ell, generator);
  powers_.push_back(BlockMatrix::identity(params_.genus, params_.modulus));
  for (std::uint32_t i = 1; i < params_.component_count; ++i) {
    powers_.push_back(block_compose(powers_.back(), gamma));
  }
}

Charpoly charpoly_coeffs(const DiagonalUnitary& u, const SatoTateGroup& group,
                         std::uint32_t component, CharpolyRoute route) {
  if (component >= group.component_count()) {
    throw std::out_of_range("charpoly: component index " + std::to_string(component) +
                            " out of range");
  }
  if (u.genus() != group.params().genus) throw std::invalid_argument("charpoly: genus mismatch");
  if (component == 0) {
    std::vector<cplx> eigenvalues;
    eigenvalues.reserve(2 * u.genus());
    for (std::size_t j = 0; j < u.genus(); ++j) {
      eigenvalues.push_back(u.u(j));
      eigenvalues.push_back(std::conj(u.u(j)));
    }
    return charpoly_from_eigenvalues(eigenvalues);
  }
  return charpoly_coeffs(u, group.gamma_power(component), route);
}

namespace {

constexpr std::uint64_t kChunkSamples = 1 << 15;

struct ChunkSums {
  // [k][n] flattened, k in 1..k_max, n in 1..n_max
  std::vector<double> sum;
  std::vector<double> sum_sq;
  McDiagnostics diag;
};

}  // namespace

McResult mc_moments(std::uint32_t ell, std::uint32_t k_max, std::uint32_t n_max,
                    std::uint64_t samples, std::uint64_t seed, const McOptions& options) {
  const auto params = CurveParams::make(ell);
  if (samples == 0) throw std::invalid_argument("mc_moments: samples must be at least 1");
  if (samples > kMaxMonteCarloSamples) {
    throw std::invalid_argument("mc_moments: samples exceed guard " +
                                std::to_string(kMaxMonteCarloSamples));
  }
  if (params.genus > kMaxMonteCarloGenus) {
    throw std::invalid_argument("mc_moments: genus exceeds guard " +
                                std::to_string(kMaxMonteCarloGenus));
  }
  if (k_max < 1 || k_max > 2 * params.genus) {
    throw std::invalid_argument("mc_moments: k_max must lie in [1, 2g]");
  }
  if (n_max < 1) throw std::invalid_argument("mc_moments: n_max must be at least 1");

  const SatoTateGroup group(ell);
  const std::uint32_t count = group.component_count();
  if (options.component && *options.component >= count) {
    throw std::out_of_range("mc_moments: component index out of range");
  }
  std::vector<std::vector<std::vector<CycleStep>>> cycles(count);
  for (std::uint32_t i = 1; i < count; ++i) cycles[i] = cycles_of(group.gamma_power(i));

  const std::uint64_t chunks = (samples + kChunkSamples - 1) / kChunkSamples;
  const std::size_t cells = std::size_t{k_max} * n_max;
  std::vector<ChunkSums> partial(chunks);
  std::atomic<std::uint64_t> next_chunk{0};

  auto worker = [&] {
    std::vector<double> powers(n_max);
    for (std::uint64_t c; (c = next_chunk.fetch_add(1)) < chunks;) {
      ChunkSums& acc = partial[c];
      acc.sum.assign(cells, 0.0);
      acc.sum_sq.assign(cells, 0.0);
      Rng rng(splitmix64(seed ^ splitmix64(c)));
      const std::uint64_t begin = c * kChunkSamples;
      const std::uint64_t end = std::min(samples, begin + kChunkSamples);
      for (std::uint64_t s = begin; s < end; ++s) {
        const std::uint32_t comp =
            options.component
                ? *options.component
                : static_cast<std::uint32_t>(((rng() >> 32) * count) >> 32);
        const DiagonalUnitary u = sample_identity_component(ell, rng);
        Charpoly cp;
        if (comp == 0) cp = charpoly_coeffs(u, group, 0, options.route);
        else if (options.route == CharpolyRoute::dense) cp = charpoly_dense(u, group.gamma_power(comp));
        else cp = charpoly_by_cycles(u, cycles[comp]);

        acc.diag.max_imag = std::max(acc.diag.max_imag, cp.max_imag);
        acc.diag.max_palindrome_defect =
            std::max(acc.diag.max_palindrome_defect, cp.palindrome_defect());
        if (comp != 0) {
          ++acc.diag.nontrivial_samples;
          if (cp.a(1) != 0.0) ++acc.diag.nontrivial_nonzero_a1;
        }
        for (std::uint32_t k = 1; k <= k_max; ++k) {
          const double x = cp.a(k);
          double p = 1.0;
          for (std::uint32_t n = 1; n <= n_max; ++n) {
            p *= x;
            const std::size_t cell = std::size_t{k - 1} * n_max + (n - 1);
            acc.sum[cell] += p;
            acc.sum_sq[cell] += p * p;
          }
        }
      }
    }
  };

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  std::vector<double> sum(cells, 0.0);
  std::vector<double> sum_sq(cells, 0.0);
  McResult result;
  for (const auto& acc : partial) {
    for (std::size_t i = 0; i < cells; ++i) {
      sum[i] += acc.sum[i];
      sum_sq[i] += acc.sum_sq[i];
    }
    auto& d = result.diagnostics;
    d.max_imag = std::max(d.max_imag, acc.diag.max_imag);
    d.max_palindrome_defect = std::max(d.max_palindrome_defect, acc.diag.max_palindrome_defect);
    d.nontrivial_samples += acc.diag.nontrivial_samples;
    d.nontrivial_nonzero_a1 += acc.diag.nontrivial_nonzero_a1;
  }

  const auto total = static_cast<double>(samples);
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    MomentTable table;
    table.coefficient = k;
    for (std::uint32_t n = 1; n <= n_max; ++n) {
      const std::size_t cell = std::size_t{k - 1} * n_max + (n - 1);
      const double mean = sum[cell] / total;
      const double var = std::max(0.0, sum_sq[cell] / total - mean * mean);
      table.moments.emplace(n, MomentEstimate{mean, std::sqrt(var / total)});
    }
    result.tables.push_back(std::move(table));
  }
  return result;
}

}  // namespace stcurves
