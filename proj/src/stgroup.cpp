#include "stcurves/stgroup.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "stcurves/arith.hpp"

namespace stcurves {

namespace {

std::uint32_t add_mod(std::uint32_t x, std::uint32_t y, std::uint32_t m) {
  return static_cast<std::uint32_t>((std::uint64_t{x} + y) % m);
}

std::uint32_t sub_mod(std::uint32_t x, std::uint32_t y, std::uint32_t m) {
  return static_cast<std::uint32_t>((std::uint64_t{x} + m - y % m) % m);
}

void require_unit(std::uint32_t ell, std::uint32_t n) {
  const std::uint32_t level = ell * ell;
  if (n == 0 || n >= level || n % ell == 0) {
    throw std::invalid_argument("n = " + std::to_string(n) + " is not a unit mod " +
                                std::to_string(level));
  }
}

std::vector<std::uint32_t> galois_images(const ExponentData& data, std::uint32_t n) {
  const std::uint32_t level = data.params.modulus;
  std::vector<std::uint32_t> g(data.e.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = static_cast<std::uint32_t>(std::uint64_t{n} * data.e[i] % level);
  }
  return g;
}

}  // namespace

CurveParams CurveParams::make(std::uint32_t ell) {
  if (!is_odd_prime(ell)) {
    throw std::invalid_argument("l = " + std::to_string(ell) + " is not an odd prime");
  }
  const std::uint32_t phi = totient_of_square(ell);
  return {ell, phi / 2, ell * ell, phi};
}

std::vector<OneForm> one_form_basis(std::uint32_t ell) {
  const auto params = CurveParams::make(ell);
  std::vector<OneForm> forms;
  forms.reserve(params.genus);
  for (std::uint32_t a = 0; a + 2 <= ell; ++a) {
    for (std::uint32_t b = a + 1; b + 1 <= ell; ++b) forms.push_back({a, b});
  }
  return forms;
}

bool ExponentData::contains(std::uint32_t t) const {
  return std::binary_search(set.begin(), set.end(), t);
}

ExponentData exponent_set(std::uint32_t ell) {
  ExponentData data{CurveParams::make(ell), one_form_basis(ell), {}, {}};
  const auto level = static_cast<std::int64_t>(data.params.modulus);
  const auto l = static_cast<std::int64_t>(ell);
  for (const auto& form : data.forms) {
    const std::int64_t raw = l * (static_cast<std::int64_t>(form.a) + 1 - form.b) - form.b;
    data.e.push_back(static_cast<std::uint32_t>(((raw % level) + level) % level));
  }
  data.set = data.e;
  std::sort(data.set.begin(), data.set.end());

  if (std::adjacent_find(data.set.begin(), data.set.end()) != data.set.end()) {
    throw std::logic_error("exponent_set: repeated exponent");
  }
  if (data.set.size() != data.params.genus) throw std::logic_error("exponent_set: |S| != g");
  for (auto t : data.set) {
    if (t % ell == 0) throw std::logic_error("exponent_set: exponent divisible by l");
    if (data.contains(data.params.modulus - t)) {
      throw std::logic_error("exponent_set: S meets -S");
    }
  }
  return data;
}

GaloisAction galois_action(std::uint32_t ell, std::uint32_t n) {
  const auto data = exponent_set(ell);
  require_unit(ell, n);
  GaloisAction action{ell, n, {}};
  for (auto g : galois_images(data, n)) {
    if (data.contains(g)) {
      action.targets.push_back({g, g, false});
    } else {
      const std::uint32_t back = data.params.modulus - g;
      if (!data.contains(back)) throw std::logic_error("galois_action: image outside S and -S");
      action.targets.push_back({g, back, true});
    }
  }
  return action;
}

bool generates_units(std::uint32_t ell, std::uint32_t n) {
  const std::uint32_t level = ell * ell;
  if (n % ell == 0) return false;
  return multiplicative_order(n % level, level) == totient_of_square(ell);
}

std::uint32_t default_generator(std::uint32_t ell) {
  const auto params = CurveParams::make(ell);
  for (std::uint32_t n = 2; n < params.modulus; ++n) {
    if (generates_units(ell, n)) return n;
  }
  throw std::logic_error("default_generator: none found");
}

std::string_view to_string(BlockTag tag) {
  switch (tag) {
    case BlockTag::zero: return "0";
    case BlockTag::I: return "I";
    case BlockTag::minus_I: return "-I";
    case BlockTag::J: return "J";
    case BlockTag::minus_J: return "-J";
  }
  return "?";
}

Block Block::from_tag(BlockTag tag) {
  switch (tag) {
    case BlockTag::zero: return {};
    case BlockTag::I: return {Shape::diagonal, 1, 0};
    case BlockTag::minus_I: return {Shape::diagonal, -1, 0};
    case BlockTag::J: return {Shape::anti, 1, 0};
    case BlockTag::minus_J: return {Shape::anti, -1, 0};
  }
  return {};
}

std::optional<BlockTag> Block::tag() const {
  if (shape == Shape::zero) return BlockTag::zero;
  if (exponent != 0) return std::nullopt;
  if (shape == Shape::diagonal) return sign > 0 ? BlockTag::I : BlockTag::minus_I;
  return sign > 0 ? BlockTag::J : BlockTag::minus_J;
}

Block block_mul(const Block& x, const Block& y, std::uint32_t m) {
  using S = Block::Shape;
  if (x.is_zero() || y.is_zero()) return {};
  const auto s = static_cast<std::int8_t>(x.sign * y.sign);
  if (x.shape == S::diagonal && y.shape == S::diagonal) {
    return {S::diagonal, s, add_mod(x.exponent, y.exponent, m)};
  }
  if (x.shape == S::diagonal) return {S::anti, s, add_mod(x.exponent, y.exponent, m)};
  if (y.shape == S::diagonal) return {S::anti, s, sub_mod(x.exponent, y.exponent, m)};
  return {S::diagonal, static_cast<std::int8_t>(-s), sub_mod(x.exponent, y.exponent, m)};
}

Block block_inverse(const Block& x, std::uint32_t m) {
  using S = Block::Shape;
  if (x.is_zero()) throw std::domain_error("block_inverse: zero block");
  if (x.shape == S::diagonal) return {S::diagonal, x.sign, sub_mod(0, x.exponent, m)};
  return {S::anti, static_cast<std::int8_t>(-x.sign), x.exponent};
}

Block block_transpose(const Block& x, std::uint32_t m) {
  if (x.shape != Block::Shape::anti) return x;
  return {Block::Shape::anti, static_cast<std::int8_t>(-x.sign), sub_mod(0, x.exponent, m)};
}

BlockMatrix::BlockMatrix(std::size_t size, std::uint32_t modulus)
    : size_(size), modulus_(modulus), blocks_(size * size) {
  if (modulus == 0) throw std::invalid_argument("BlockMatrix: modulus must be positive");
}

BlockMatrix BlockMatrix::identity(std::size_t size, std::uint32_t modulus) {
  BlockMatrix m(size, modulus);
  for (std::size_t i = 0; i < size; ++i) m(i, i) = Block::from_tag(BlockTag::I);
  return m;
}

BlockMatrix BlockMatrix::symplectic_form(std::size_t size, std::uint32_t modulus) {
  BlockMatrix m(size, modulus);
  for (std::size_t i = 0; i < size; ++i) m(i, i) = Block::from_tag(BlockTag::J);
  return m;
}

bool BlockMatrix::is_monomial() const {
  std::vector<int> col_hits(size_, 0);
  for (std::size_t i = 0; i < size_; ++i) {
    int row_hits = 0;
    for (std::size_t j = 0; j < size_; ++j) {
      if (!(*this)(i, j).is_zero()) {
        ++row_hits;
        ++col_hits[j];
      }
    }
    if (row_hits != 1) return false;
  }
  return std::all_of(col_hits.begin(), col_hits.end(), [](int c) { return c == 1; });
}

bool BlockMatrix::is_signed_permutation() const {
  if (!is_monomial()) return false;
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.tag(); });
}

bool BlockMatrix::is_diagonal_sign() const {
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t j = 0; j < size_; ++j) {
      const auto tag = (*this)(i, j).tag();
      if (i == j && tag != BlockTag::I && tag != BlockTag::minus_I) return false;
      if (i != j && tag != BlockTag::zero) return false;
    }
  }
  return true;
}

std::size_t BlockMatrix::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(blocks_.begin(), blocks_.end(), [](const Block& b) { return !b.is_zero(); }));
}

BlockMatrix gamma_matrix(std::uint32_t ell, std::uint32_t n) {
  const auto data = exponent_set(ell);
  require_unit(ell, n);
  const auto g = galois_images(data, n);
  const std::uint32_t level = data.params.modulus;
  BlockMatrix gamma(data.params.genus, level);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < data.e.size(); ++j) {
      if (g[i] == data.e[j]) gamma(i, j) = Block::from_tag(BlockTag::I);
      else if (g[i] == level - data.e[j]) gamma(i, j) = Block::from_tag(BlockTag::J);
    }
  }
  return gamma;
}

BlockMatrix gamma_inverse(std::uint32_t ell, std::uint32_t n) {
  const auto data = exponent_set(ell);
  require_unit(ell, n);
  const auto g = galois_images(data, n);
  const std::uint32_t level = data.params.modulus;
  BlockMatrix inv(data.params.genus, level);
  for (std::size_t i = 0; i < data.e.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g[j] == data.e[i]) inv(i, j) = Block::from_tag(BlockTag::I);
      else if (g[j] == level - data.e[i]) inv(i, j) = Block::from_tag(BlockTag::minus_J);
    }
  }
  return inv;
}

BlockMatrix alpha_matrix(const ExponentData& data) {
  BlockMatrix alpha(data.params.genus, data.params.modulus);
  for (std::size_t j = 0; j < data.e.size(); ++j) alpha(j, j) = Block::zeta_power(data.e[j]);
  return alpha;
}

BlockMatrix block_compose(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("block_compose: size mismatch");
  if (a.modulus() != b.modulus()) throw std::invalid_argument("block_compose: modulus mismatch");
  if (!a.is_monomial() || !b.is_monomial()) {
    throw std::invalid_argument("block_compose: operands must be monomial block matrices");
  }
  const std::size_t n = a.size();
  BlockMatrix c(n, a.modulus());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!b(k, j).is_zero()) c(i, j) = block_mul(a(i, k), b(k, j), a.modulus());
      }
    }
  }
  return c;
}

BlockMatrix block_inverse(const BlockMatrix& a) {
  if (!a.is_monomial()) throw std::invalid_argument("block_inverse: matrix is not monomial");
  BlockMatrix inv(a.size(), a.modulus());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (!a(i, j).is_zero()) inv(j, i) = block_inverse(a(i, j), a.modulus());
    }
  }
  return inv;
}

BlockMatrix block_transpose(const BlockMatrix& a) {
  BlockMatrix t(a.size(), a.modulus());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) t(j, i) = block_transpose(a(i, j), a.modulus());
  }
  return t;
}

BlockMatrix block_power(const BlockMatrix& a, std::uint64_t d) {
  BlockMatrix result = BlockMatrix::identity(a.size(), a.modulus());
  BlockMatrix base = a;
  while (d > 0) {
    if (d & 1) result = block_compose(result, base);
    d >>= 1;
    if (d > 0) base = block_compose(base, base);
  }
  return result;
}

ConjugatedAlpha conjugate_alpha(const BlockMatrix& gamma, std::span<const std::uint32_t> e) {
  if (e.size() != gamma.size()) throw std::invalid_argument("conjugate_alpha: size mismatch");
  const std::uint32_t m = gamma.modulus();
  BlockMatrix alpha(gamma.size(), m);
  for (std::size_t j = 0; j < e.size(); ++j) alpha(j, j) = Block::zeta_power(e[j] % m);

  const BlockMatrix product = block_compose(block_compose(gamma, alpha), block_inverse(gamma));

  ConjugatedAlpha out;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      if (i != j && !product(i, j).is_zero()) {
        throw std::logic_error("conjugate_alpha: product is not block diagonal");
      }
    }
    const Block& d = product(i, i);
    if (d.shape != Block::Shape::diagonal || d.sign != 1) {
      throw std::logic_error("conjugate_alpha: diagonal block is not a power of Z");
    }
    bool through_j = false;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
      if (!gamma(i, k).is_zero()) through_j = gamma(i, k).shape == Block::Shape::anti;
    }
    out.exponents.push_back(through_j ? sub_mod(0, d.exponent, m) : d.exponent);
    out.conjugated.push_back(through_j);
  }
  return out;
}

bool matches(const ConjugatedAlpha& conj, const GaloisAction& action) {
  if (conj.exponents.size() != action.targets.size()) return false;
  for (std::size_t i = 0; i < conj.exponents.size(); ++i) {
    if (conj.exponents[i] != action.targets[i].exponent) return false;
    if (conj.conjugated[i] != action.targets[i].conjugated) return false;
  }
  return true;
}

namespace {

constexpr std::uint64_t kOrderSearchLimit = 1u << 20;

template <typename Pred>
std::uint64_t first_power_where(const BlockMatrix& gamma, Pred pred) {
  if (!gamma.is_monomial()) throw std::invalid_argument("order: matrix is not monomial");
  BlockMatrix power = gamma;
  for (std::uint64_t d = 1; d <= kOrderSearchLimit; ++d) {
    if (pred(power)) return d;
    power = block_compose(power, gamma);
  }
  throw std::runtime_error("order: search limit exceeded");
}

}  // namespace

std::uint64_t component_order(const BlockMatrix& gamma) {
  return first_power_where(gamma, [](const BlockMatrix& p) { return p.is_diagonal_sign(); });
}

std::uint64_t matrix_order(const BlockMatrix& gamma) {
  const auto id = BlockMatrix::identity(gamma.size(), gamma.modulus());
  return first_power_where(gamma, [&](const BlockMatrix& p) { return p == id; });
}

bool is_symplectic(const BlockMatrix& a) {
  const std::size_t n = 2 * a.size();
  std::vector<int> dense(n * n, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      const auto tag = a(i, j).tag();
      if (!tag) throw std::invalid_argument("is_symplectic: block is not one of 0, +-I, +-J");
      std::array<int, 4> m{};  // row-major 2x2
      switch (*tag) {
        case BlockTag::zero: break;
        case BlockTag::I: m = {1, 0, 0, 1}; break;
        case BlockTag::minus_I: m = {-1, 0, 0, -1}; break;
        case BlockTag::J: m = {0, 1, -1, 0}; break;
        case BlockTag::minus_J: m = {0, -1, 1, 0}; break;
      }
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) dense[(2 * i + r) * n + 2 * j + c] = m[2 * r + c];
      }
    }
  }
  // (Omega A)[r][c]: Omega pairs rows 2k and 2k+1 as (x, y) -> (y, -x).
  std::vector<long> omega_a(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t partner = r ^ 1;
    const long sign = (r % 2 == 0) ? 1 : -1;
    for (std::size_t c = 0; c < n; ++c) omega_a[r * n + c] = sign * dense[partner * n + c];
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      long sum = 0;
      for (std::size_t k = 0; k < n; ++k) sum += dense[k * n + r] * omega_a[k * n + c];
      long expected = 0;
      if (r / 2 == c / 2 && r != c) expected = (r % 2 == 0) ? 1 : -1;
      if (sum != expected) return false;
    }
  }
  return true;
}

}  // namespace stcurves
