#include <doctest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "anholonomy/circuits.hpp"
#include "anholonomy/core.hpp"

using namespace anholonomy;

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<double> sorted_angles(const Matrix& u) {
  EigenFrame f = eig_unitary(u);
  std::vector<double> out(f.angles.data(), f.angles.data() + f.angles.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("QubitBasis axes") {
  QubitBasis std_basis = QubitBasis::standard();
  std_basis.validate();
  Eigen::Vector2cd y = std_basis.y();
  CHECK(std::abs(y(0) - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(y(1) - Complex(0, -1 / std::sqrt(2.0))) < 1e-15);

  Eigen::Matrix2cd py = std_basis.y_projector();
  CHECK(max_abs(py * py - py) < 1e-15);
  CHECK(std::abs((py * y - y).norm()) < 1e-15);

  Eigen::Matrix2cd z = std_basis.z_op();
  CHECK(std::abs(z(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(z(1, 1) - Complex(-1, 0)) < 1e-15);
  CHECK(std::abs(z(0, 1)) < 1e-15);

  Eigen::Matrix2cd yop = std_basis.y_op();
  CHECK(max_abs(yop * yop - Eigen::Matrix2cd::Identity()) < 1e-15);
  CHECK(max_abs(yop - (Eigen::Matrix2cd::Identity() - 2.0 * py)) < 1e-15);
}

TEST_CASE("QubitBasis::rotated conjugates the axes") {
  QubitBasis rot = QubitBasis::rotated(0.4);
  rot.validate();
  Eigen::Matrix2cd w;
  w << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  QubitBasis std_basis = QubitBasis::standard();
  CHECK(max_abs(rot.z_op() - w * std_basis.z_op() * w.adjoint()) < 1e-14);
  CHECK(max_abs(rot.y_projector() - w * std_basis.y_projector() * w.adjoint()) < 1e-14);
  CHECK_THROWS_AS((QubitBasis{Eigen::Vector2cd(1, 0), Eigen::Vector2cd(1, 0)}.validate()),
                  NotUnitaryError);
}

TEST_CASE("build_u matches the projector closed form entrywise") {
  QubitBasis basis = QubitBasis::standard();
  Eigen::Matrix2cd py = basis.y_projector();
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  for (long long p : {-2LL, 0LL, 1LL, 3LL, 5LL}) {
    for (double lambda : {0.0, 0.3, 2.2, 5.8}) {
      Eigen::Matrix2cd expected =
          (std::polar(1.0, (p - 1) * lambda) * (id - py) + std::polar(1.0, lambda) * py) *
          basis.z_op();
      CHECK(max_abs(build_u(lambda, p) - Matrix(expected)) < 1e-14);
    }
  }
}

TEST_CASE("build_u basics") {
  for (long long p : {-3LL, 0LL, 1LL, 2LL, 4LL}) {
    CHECK(max_abs(build_u(0.0, p) - Matrix(QubitBasis::standard().z_op())) < 1e-15);
    CHECK(max_abs(build_u(1.3 + kTwoPi, p) - build_u(1.3, p)) < 1e-13);
    CHECK(is_unitary(build_u(0.9, p), 1e-12));
  }
}

TEST_CASE("build_u eigenangles follow n pi + p lambda / 2") {
  // p=1 at lambda=pi: angles pi/2 and 3 pi/2.
  auto got = sorted_angles(build_u(kPi, 1));
  CHECK(got[0] == doctest::Approx(kPi / 2));
  CHECK(got[1] == doctest::Approx(3 * kPi / 2));

  // p=1 at lambda=pi/3: pi/6 and pi/6 + pi.
  got = sorted_angles(build_u(kPi / 3, 1));
  CHECK(got[0] == doctest::Approx(kPi / 6));
  CHECK(got[1] == doctest::Approx(kPi / 6 + kPi));

  for (long long p : {0LL, 1LL, 2LL, 3LL}) {
    for (double lambda : {0.1, 1.7, 4.4}) {
      std::vector<double> expected = {wrap_angle(p * lambda / 2),
                                      wrap_angle(kPi + p * lambda / 2)};
      std::sort(expected.begin(), expected.end());
      got = sorted_angles(build_u(lambda, p));
      CHECK(circular_distance(got[0], expected[0]) < 1e-12);
      CHECK(circular_distance(got[1], expected[1]) < 1e-12);
    }
  }
}

TEST_CASE("build_uY has lambda-independent eigenvectors") {
  QubitBasis basis = QubitBasis::standard();
  Eigen::Vector2cd y = basis.y();
  for (long long p : {0LL, 1LL, 2LL, 3LL, 4LL}) {
    for (double lambda : {0.25, 1.9, 3.7}) {
      Matrix u = build_uY(lambda, p);
      CHECK(is_unitary(u, 1e-12));
      // |y> carries -e^{i lambda}; its complement carries e^{i(p-1) lambda}.
      CHECK((u * y - (-std::polar(1.0, lambda)) * y).norm() < 1e-13);
      Eigen::Vector2cd w(std::conj(y(1)), -std::conj(y(0)));
      CHECK((u * w - std::polar(1.0, (p - 1) * lambda) * w).norm() < 1e-13);
    }
  }

  // Frames at distinct lambda agree up to phases: overlap moduli are 1.
  Matrix f1 = eig_unitary(build_uY(0.3, 3)).vectors;
  Matrix f2 = eig_unitary(build_uY(2.1, 3)).vectors;
  Matrix overlap = f1.adjoint() * f2;
  for (int i = 0; i < 2; ++i) {
    double row_max = std::max(std::abs(overlap(i, 0)), std::abs(overlap(i, 1)));
    CHECK(row_max == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("build_uY eigenvalue crossing sits where (p-2) lambda = pi") {
  // p=1: single crossing at lambda = pi.
  CHECK(eig_unitary(build_uY(kPi, 1)).degenerate());
  CHECK_FALSE(eig_unitary(build_uY(kPi - 0.2, 1)).degenerate());
  // p=2: the gap is constant, no crossing anywhere.
  for (double lambda : {0.0, 1.0, kPi, 5.0})
    CHECK(eig_unitary(build_uY(lambda, 2)).min_circular_gap() == doctest::Approx(kPi));
  // p=0 and p=4: crossings at pi/2 and 3 pi/2.
  for (long long p : {0LL, 4LL}) {
    CHECK(eig_unitary(build_uY(kPi / 2, p)).degenerate());
    CHECK(eig_unitary(build_uY(3 * kPi / 2, p)).degenerate());
  }
}

TEST_CASE("controlled_gate against a kron oracle") {
  Matrix u = random_unitary(4, 31);
  QubitBasis basis = QubitBasis::standard();
  for (long long p : {0LL, 1LL, 2LL, 3LL}) {
    Matrix expected = kron(Matrix::Identity(2, 2) - Matrix(basis.y_projector()),
                           unitary_power(u, p - 1)) +
                      kron(Matrix(basis.y_projector()), u);
    CHECK(max_abs(controlled_gate(u, p) - expected) < 1e-13);
  }

  // With the trivial payload the gate is the identity for every p.
  CHECK(max_abs(controlled_gate(Matrix::Identity(2, 2), 3) - Matrix::Identity(4, 4)) < 1e-14);

  // The |y> control line applies U once.
  Eigen::Vector2cd y = basis.y();
  Vector v = Vector::Zero(4);
  v(0) = Complex(0.6, 0.0);
  v(1) = Complex(0.0, 0.8);
  Vector lifted = Vector::Zero(8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 4; ++b) lifted(a * 4 + b) = y(a) * v(b);
  Vector mapped = controlled_gate(u, 2) * lifted;
  Vector uv = u * v;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(std::abs(mapped(a * 4 + b) - y(a) * uv(b)) < 1e-13);

  Matrix skewed = Matrix::Identity(2, 2);
  skewed(0, 0) = 2.0;
  CHECK_THROWS_AS(controlled_gate(skewed, 1), NotUnitaryError);
}

TEST_CASE("build_UN matches a direct kron assembly") {
  QubitBasis basis = QubitBasis::standard();
  CircuitParams params{{3, 1, 2}};
  for (double lambda : {0.0, 0.7, 4.1}) {
    Matrix direct = build_u(lambda, 3);
    for (int j = 1; j < 3; ++j) {
      long long pj = params.p[static_cast<std::size_t>(j)];
      int dim = static_cast<int>(direct.rows());
      Matrix step = kron(Matrix::Identity(2, 2) - Matrix(basis.y_projector()),
                         unitary_power(direct, pj - 1)) +
                    kron(Matrix(basis.y_projector()), direct);
      direct = step * kron(Matrix(basis.z_op()), Matrix::Identity(dim, dim));
    }
    Matrix lib = build_UN(lambda, params);
    CHECK(max_abs(lib - direct) < 1e-12);
    CHECK(is_unitary(lib, 1e-11));
  }
}

TEST_CASE("build_UN retrieval with a scalar payload") {
  // Feeding e^{i lambda} 1_A through one hierarchy level returns the
  // one-qubit gate tensored with the untouched ancilla.
  const double lambda = 0.7;
  Matrix payload = std::polar(1.0, lambda) * Matrix::Identity(4, 4);
  Matrix step = controlled_gate(payload, 3) *
                kron(Matrix(QubitBasis::standard().z_op()), Matrix::Identity(4, 4));
  CHECK(max_abs(step - kron(build_u(lambda, 3), Matrix::Identity(4, 4))) < 1e-13);
}

TEST_CASE("build_UN dimension cap") {
  CircuitParams nine{{1, 1, 1, 1, 1, 1, 1, 1, 1}};
  CHECK_THROWS_AS(build_UN(0.5, nine), DimensionOverflowError);
  CHECK_NOTHROW(build_UN(0.5, nine, QubitBasis::standard(), 9));
  CHECK_THROWS_AS(build_UN(0.5, CircuitParams{{}}), Error);
}

TEST_CASE("unitary_power handles negative exponents") {
  Matrix u = random_unitary(3, 9);
  CHECK(max_abs(unitary_power(u, 0) - Matrix::Identity(3, 3)) < 1e-14);
  CHECK(max_abs(unitary_power(u, 3) - u * u * u) < 1e-13);
  CHECK(max_abs(unitary_power(u, -1) - u.adjoint()) < 1e-14);
  CHECK(max_abs(unitary_power(u, -2) - Matrix(u.adjoint() * u.adjoint())) < 1e-13);
}

TEST_CASE("construction is basis covariant") {
  QubitBasis rot = QubitBasis::rotated(0.4);
  Eigen::Matrix2cd w;
  w << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  for (double lambda : {0.6, 3.3}) {
    CHECK(max_abs(build_u(lambda, 3, rot) - Matrix(w * build_u(lambda, 3) * w.adjoint())) <
          1e-13);
    CircuitParams params{{1, 3}};
    Matrix w2 = kron(w, w);
    CHECK(max_abs(build_UN(lambda, params, rot) -
                  Matrix(w2 * build_UN(lambda, params) * w2.adjoint())) < 1e-12);
  }
}

TEST_CASE("CycleSpec grid") {
  CycleSpec spec{8};
  spec.validate();
  CHECK(spec.points() == 9);
  CHECK(spec.lambda(0) == doctest::Approx(0.0));
  CHECK(spec.lambda(8) == doctest::Approx(kTwoPi));
  CHECK_THROWS_AS(CycleSpec{1}.validate(), Error);
}
