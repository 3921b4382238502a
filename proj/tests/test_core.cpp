#include <doctest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "anholonomy/core.hpp"
#include "anholonomy/wide_int.hpp"

using namespace anholonomy;

TEST_CASE("wrap_angle lands in [0, 2 pi)") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(kTwoPi) == doctest::Approx(0.0));
  CHECK(wrap_angle(-kPi / 2) == doctest::Approx(3 * kPi / 2));
  CHECK(wrap_angle(7 * kPi / 2) == doctest::Approx(3 * kPi / 2));
  CHECK(wrap_angle(-6 * kTwoPi + 0.25) == doctest::Approx(0.25));
  for (double x : {-9.7, -0.1, 0.0, 0.3, 5.9, 123.4}) {
    double w = wrap_angle(x);
    CHECK(w >= 0.0);
    CHECK(w < kTwoPi);
  }
}

TEST_CASE("circular_distance is symmetric and capped at pi") {
  CHECK(circular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  CHECK(circular_distance(0.0, kPi) == doctest::Approx(kPi));
  CHECK(circular_distance(1.0, 1.0) == doctest::Approx(0.0));
  for (double a : {0.0, 1.1, 4.5}) {
    for (double b : {0.2, 2.9, 6.1}) {
      CHECK(circular_distance(a, b) == doctest::Approx(circular_distance(b, a)));
      CHECK(circular_distance(a, b) <= kPi + 1e-15);
    }
  }
}

TEST_CASE("WideInt checked arithmetic") {
  WideInt a = 7, b = -3;
  CHECK((a + b) == WideInt(4));
  CHECK((a - b) == WideInt(10));
  CHECK((a * b) == WideInt(-21));
  CHECK((-a) == WideInt(-7));
  CHECK(a.odd());
  CHECK_FALSE(WideInt(10).odd());
  CHECK(a > b);
  CHECK(b < WideInt(0));

  // 2^100, well past 64 bits.
  CHECK(WideInt::pow2(100).str() == "1267650600228229401496703205376");
  CHECK(WideInt::pow2(0) == WideInt(1));
  CHECK_THROWS_AS(WideInt::pow2(126), OverflowError);
  CHECK_THROWS_AS(WideInt::pow2(-1), OverflowError);
  CHECK_THROWS_AS(WideInt::pow2(125) * WideInt(4), OverflowError);
  CHECK((WideInt::pow2(125) + WideInt::pow2(125)) == WideInt::pow2(125) * WideInt(2));
  const WideInt near_max = WideInt::pow2(125) * WideInt(3);
  CHECK_THROWS_AS(near_max + near_max, OverflowError);
  CHECK_THROWS_AS((-near_max) - near_max, OverflowError);
}

TEST_CASE("WideInt floor and Euclidean reductions on negatives") {
  CHECK(WideInt(-3).floor_div2() == WideInt(-2));
  CHECK(WideInt(-4).floor_div2() == WideInt(-2));
  CHECK(WideInt(5).floor_div2() == WideInt(2));
  CHECK(WideInt(-3).mod2() == 1);
  CHECK(WideInt(-4).mod2() == 0);
  CHECK(WideInt(-1).mod_pow2(3) == WideInt(7));
  CHECK(WideInt(-9).mod_pow2(3) == WideInt(7));
  CHECK(WideInt(9).mod_pow2(3) == WideInt(1));
  CHECK(WideInt(-1).mod_euclid(5) == WideInt(4));
  CHECK(WideInt(-10).mod_euclid(5) == WideInt(0));
  CHECK(WideInt(13).mod_euclid(5) == WideInt(3));
  CHECK_THROWS_AS(WideInt(1).mod_euclid(0), OverflowError);
  CHECK_THROWS_AS(WideInt(1).mod_euclid(-4), OverflowError);

  // floor keeps n = s + 2 r exact for any sign.
  for (long long v : {-7LL, -2LL, -1LL, 0LL, 1LL, 6LL, 9LL}) {
    WideInt w(v);
    CHECK(w == WideInt(w.mod2()) + w.floor_div2() * WideInt(2));
  }
}

TEST_CASE("WideInt conversions") {
  CHECK(WideInt(-42).str() == "-42");
  CHECK(WideInt(0).str() == "0");
  CHECK(WideInt(123456789).to_int64() == 123456789);
  CHECK_THROWS_AS(WideInt::pow2(90).to_int64(), OverflowError);
  CHECK(WideInt::pow2(10).to_double() == doctest::Approx(1024.0));
}

TEST_CASE("Permutation validates its image") {
  Permutation id = Permutation::identity(4);
  CHECK(id.size() == 4);
  CHECK(id(2) == 2);
  CHECK(id == Permutation({0, 1, 2, 3}));
  CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);   // duplicate
  CHECK_THROWS_AS(Permutation({0, 3}), Error);      // out of range
  CHECK_THROWS_AS(Permutation({-1, 0}), Error);
}

TEST_CASE("cycle_decompose lists cycles by smallest element") {
  CHECK(cycle_decompose(Permutation::identity(2)) ==
        std::vector<std::vector<int>>{{0}, {1}});
  CHECK(cycle_decompose(Permutation({1, 0})) == std::vector<std::vector<int>>{{0, 1}});
  // Shift by 2 on 8 points: two interleaved 4-cycles.
  std::vector<int> image(8);
  for (int k = 0; k < 8; ++k) image[static_cast<std::size_t>(k)] = (k + 2) % 8;
  CHECK(cycle_decompose(Permutation(image)) ==
        std::vector<std::vector<int>>{{0, 2, 4, 6}, {1, 3, 5, 7}});
  // Mixed: a fixed point next to a 2-cycle.
  CHECK(cycle_decompose(Permutation({0, 2, 1})) ==
        std::vector<std::vector<int>>{{0}, {1, 2}});
}

TEST_CASE("eig_unitary on diag(1, -1)") {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  EigenFrame f = eig_unitary(z);
  REQUIRE(f.dim() == 2);
  CHECK(f.angles(0) == doctest::Approx(0.0));
  CHECK(f.angles(1) == doctest::Approx(kPi));
  CHECK(std::abs(f.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(f.vectors(1, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(f.vectors(1, 0)) == doctest::Approx(0.0));
  CHECK(f.min_circular_gap() == doctest::Approx(kPi));
  CHECK_FALSE(f.degenerate());
}

TEST_CASE("eig_unitary reconstructs random unitaries") {
  for (int dim : {2, 3, 8, 16, 64, 256}) {
    Matrix u = random_unitary(dim, 1000 + static_cast<std::uint64_t>(dim));
    EigenFrame f = eig_unitary(u);
    REQUIRE(f.dim() == dim);
    for (int k = 1; k < dim; ++k) CHECK(f.angles(k) >= f.angles(k - 1));
    CHECK(max_abs(f.vectors.adjoint() * f.vectors - Matrix::Identity(dim, dim)) < 1e-10);
    Matrix rebuilt = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k)
      rebuilt += std::polar(1.0, f.angles(k)) * (f.vectors.col(k) * f.vectors.col(k).adjoint());
    CHECK(max_abs(rebuilt - u) < 1e-8);
  }
}

TEST_CASE("eig_unitary is deterministic") {
  Matrix u = random_unitary(12, 77);
  EigenFrame a = eig_unitary(u);
  EigenFrame b = eig_unitary(u);
  CHECK((a.angles - b.angles).cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs(a.vectors - b.vectors) == 0.0);
}

TEST_CASE("eig_unitary rejects non-unitary input") {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(eig_unitary(m), NotUnitaryError);
}

TEST_CASE("min_circular_gap sees the wrap-around pair") {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, 0.01);
  u(1, 1) = std::polar(1.0, kTwoPi - 0.01);
  EigenFrame f = eig_unitary(u);
  CHECK(f.min_circular_gap() == doctest::Approx(0.02));

  Matrix same = Matrix::Identity(2, 2);
  CHECK(eig_unitary(same).degenerate());
}

TEST_CASE("random_unitary is seeded") {
  Matrix a = random_unitary(6, 5);
  Matrix b = random_unitary(6, 5);
  Matrix c = random_unitary(6, 6);
  CHECK(max_abs(a - b) == 0.0);
  CHECK(max_abs(a - c) > 1e-3);
  CHECK(is_unitary(a, 1e-12));
}
