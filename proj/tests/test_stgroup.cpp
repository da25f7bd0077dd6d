#include <doctest.h>

#include <algorithm>
#include <array>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "stcurves/arith.hpp"
#include "stcurves/stgroup.hpp"

using namespace stcurves;

namespace {

using Mat2 = std::array<std::complex<double>, 4>;

Mat2 dense(const Block& b, std::uint32_t modulus) {
  const auto z = std::polar(1.0, 2.0 * std::numbers::pi * b.exponent / modulus);
  const double s = b.sign;
  switch (b.shape) {
    case Block::Shape::zero: return {0.0, 0.0, 0.0, 0.0};
    case Block::Shape::diagonal: return {s * z, 0.0, 0.0, s * std::conj(z)};
    case Block::Shape::anti: return {0.0, s * z, -s * std::conj(z), 0.0};
  }
  return {};
}

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

bool near(const Mat2& x, const Mat2& y) {
  for (int i = 0; i < 4; ++i)
    if (std::abs(x[i] - y[i]) > 1e-12) return false;
  return true;
}

BlockTag tag_at(const BlockMatrix& m, std::size_t i, std::size_t j) {
  const auto t = m(i, j).tag();
  REQUIRE(t.has_value());
  return *t;
}

}  // namespace

TEST_CASE("one-form basis") {
  const auto b5 = one_form_basis(5);
  const std::vector<OneForm> want5{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2},
                                   {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
  CHECK(b5 == want5);
  CHECK(one_form_basis(3) == std::vector<OneForm>{{0, 1}, {0, 2}, {1, 2}});
  for (std::uint32_t ell : {3u, 5u, 7u, 11u, 13u}) {
    CHECK(one_form_basis(ell).size() == ell * (ell - 1) / 2);
  }
  CHECK_THROWS(one_form_basis(9));
  CHECK_THROWS(one_form_basis(2));
}

TEST_CASE("exponent set") {
  CHECK(exponent_set(5).e == std::vector<std::uint32_t>{24, 18, 12, 6, 23, 17, 11, 22, 16, 21});
  const auto d3 = exponent_set(3);
  CHECK(d3.e == std::vector<std::uint32_t>{8, 4, 7});
  std::vector<std::uint32_t> both;
  for (auto t : d3.set) {
    both.push_back(t);
    both.push_back(9 - t);
  }
  std::sort(both.begin(), both.end());
  CHECK(both == std::vector<std::uint32_t>{1, 2, 4, 5, 7, 8});

  for (std::uint32_t ell : {3u, 5u, 7u, 11u, 13u}) {
    const auto d = exponent_set(ell);
    const std::uint32_t level = ell * ell;
    CHECK(d.set.size() == d.params.genus);
    for (auto t : d.set) {
      CHECK(t % ell != 0);
      CHECK_FALSE(d.contains(level - t));
    }
  }
}

TEST_CASE("galois action") {
  const auto a = galois_action(5, 2);
  const std::vector<GaloisTarget> want{
      {23, 23, false}, {11, 11, false}, {24, 24, false}, {12, 12, false}, {21, 21, false},
      {9, 16, true},   {22, 22, false}, {19, 6, true},   {7, 18, true},   {17, 17, false}};
  CHECK(a.targets == want);

  const auto a3 = galois_action(3, 2);
  CHECK(a3.targets == std::vector<GaloisTarget>{{7, 7, false}, {8, 8, false}, {5, 4, true}});

  const auto id = galois_action(7, 1);
  const auto e7 = exponent_set(7).e;
  for (std::size_t i = 0; i < e7.size(); ++i) {
    CHECK(id.targets[i].exponent == e7[i]);
    CHECK_FALSE(id.targets[i].conjugated);
  }
  CHECK_THROWS(galois_action(5, 10));
  CHECK_THROWS(galois_action(5, 0));
}

TEST_CASE("generators") {
  CHECK(default_generator(3) == 2);
  CHECK(default_generator(5) == 2);
  CHECK(default_generator(7) == 3);
  CHECK(generates_units(7, 3));
  CHECK_FALSE(generates_units(5, 7));  // 7^4 = 1 mod 25
}

TEST_CASE("block algebra agrees with 2x2 complex matrices") {
  const std::uint32_t modulus = 25;
  std::vector<Block> blocks;
  for (auto shape : {Block::Shape::diagonal, Block::Shape::anti})
    for (std::int8_t s : {std::int8_t{1}, std::int8_t{-1}})
      for (std::uint32_t t : {0u, 1u, 7u, 24u}) blocks.push_back({shape, s, t});
  const Mat2 id{1.0, 0.0, 0.0, 1.0};
  for (const auto& x : blocks) {
    CHECK(near(mul(dense(x, modulus), dense(block_inverse(x, modulus), modulus)), id));
    const Mat2 dx = dense(x, modulus);
    CHECK(near(dense(block_transpose(x, modulus), modulus), Mat2{dx[0], dx[2], dx[1], dx[3]}));
    for (const auto& y : blocks) {
      REQUIRE(near(dense(block_mul(x, y, modulus), modulus),
                   mul(dense(x, modulus), dense(y, modulus))));
    }
  }
  const Block j = Block::from_tag(BlockTag::J);
  CHECK(block_mul(j, j, modulus).tag() == BlockTag::minus_I);
}

TEST_CASE("gamma") {
  const auto g3 = gamma_matrix(3, 2);
  CHECK(g3.nonzero_count() == 3);
  CHECK(tag_at(g3, 0, 2) == BlockTag::I);
  CHECK(tag_at(g3, 1, 0) == BlockTag::I);
  CHECK(tag_at(g3, 2, 1) == BlockTag::J);

  const auto g5 = gamma_matrix(5, 2);
  CHECK(tag_at(g5, 0, 4) == BlockTag::I);
  CHECK(tag_at(g5, 5, 8) == BlockTag::J);

  const auto sq = block_compose(g3, g3);
  CHECK_FALSE(sq(0, 1).is_zero());
  CHECK_FALSE(sq(1, 2).is_zero());
  CHECK_FALSE(sq(2, 0).is_zero());
  CHECK(sq.nonzero_count() == 3);

  for (std::uint32_t ell : {3u, 5u, 7u, 11u}) {
    for (std::uint32_t n = 1; n < ell * ell; ++n) {
      if (n % ell == 0) continue;
      const auto g = gamma_matrix(ell, n);
      REQUIRE(g.is_signed_permutation());
      CHECK(g.nonzero_count() == ell * (ell - 1) / 2);
      const auto inv = gamma_inverse(ell, n);
      CHECK(block_inverse(g) == inv);
      CHECK(block_compose(g, inv) == BlockMatrix::identity(g.size(), g.modulus()));
      // inverse is the transpose with J -> -J, i.e. the plain transpose
      CHECK(block_transpose(g) == inv);
    }
  }
  CHECK_THROWS(block_compose(gamma_matrix(3, 2), gamma_matrix(5, 2)));
}

TEST_CASE("conjugating alpha reproduces the Galois action") {
  for (std::uint32_t ell : {3u, 5u, 7u, 11u}) {
    const auto data = exponent_set(ell);
    for (std::uint32_t n = 1; n < ell * ell; ++n) {
      if (n % ell == 0) continue;
      CHECK(matches(conjugate_alpha(gamma_matrix(ell, n), data.e), galois_action(ell, n)));
    }
    const auto id = conjugate_alpha(BlockMatrix::identity(data.e.size(), ell * ell), data.e);
    CHECK(id.exponents == data.e);
    CHECK(std::none_of(id.conjugated.begin(), id.conjugated.end(), [](bool b) { return b; }));
  }
  const auto c3 = conjugate_alpha(gamma_matrix(3, 2), exponent_set(3).e);
  CHECK(c3.exponents == std::vector<std::uint32_t>{7, 8, 4});
  CHECK(c3.conjugated == std::vector<bool>{false, false, true});
}

TEST_CASE("powers of gamma follow powers of n") {
  for (std::uint32_t ell : {3u, 5u, 7u}) {
    const std::uint32_t level = ell * ell;
    const std::uint32_t n = default_generator(ell);
    const auto data = exponent_set(ell);
    const auto gamma = gamma_matrix(ell, n);
    auto power = BlockMatrix::identity(gamma.size(), level);
    std::uint64_t nd = 1;
    for (std::uint32_t d = 0; d < ell * (ell - 1); ++d) {
      // gamma^d carries only tag blocks, so conjugation by it is sigma_{n^d}.
      REQUIRE(power.is_signed_permutation());
      CHECK(matches(conjugate_alpha(power, data.e), galois_action(ell, std::uint32_t(nd))));
      power = block_compose(power, gamma);
      nd = nd * n % level;
    }
  }
}

TEST_CASE("component and matrix order") {
  CHECK(component_order(gamma_matrix(3, 2)) == 6);
  CHECK(component_order(gamma_matrix(5, 2)) == 20);
  CHECK(component_order(gamma_matrix(7, 3)) == 42);
  CHECK(component_order(gamma_matrix(11, default_generator(11))) == 110);
  for (std::uint32_t ell : {3u, 5u, 7u}) {
    const auto g = gamma_matrix(ell, default_generator(ell));
    const auto m = matrix_order(g);
    CHECK(m % component_order(g) == 0);
    CHECK(block_power(g, m) == BlockMatrix::identity(g.size(), g.modulus()));
  }
  CHECK(component_order(BlockMatrix::identity(4, 25)) == 1);
  // A non-generator gives a smaller order.
  CHECK(component_order(gamma_matrix(5, 7)) == 4);
}

TEST_CASE("symplectic check") {
  CHECK(is_symplectic(BlockMatrix::identity(3, 9)));
  for (std::uint32_t ell : {3u, 5u, 7u, 11u}) {
    const auto g = gamma_matrix(ell, default_generator(ell));
    auto p = g;
    for (std::uint32_t d = 1; d <= ell * (ell - 1); ++d) {
      REQUIRE(is_symplectic(p));
      p = block_compose(p, g);
    }
  }
  auto broken = gamma_matrix(3, 2);
  broken(0, 0) = Block::from_tag(BlockTag::minus_I);
  CHECK_FALSE(is_symplectic(broken));
  BlockMatrix scaled = BlockMatrix::identity(2, 9);
  scaled(0, 0) = Block::from_tag(BlockTag::J);
  scaled(1, 1) = Block::from_tag(BlockTag::minus_I);
  CHECK(is_symplectic(scaled));
}
