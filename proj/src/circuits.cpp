#include "anholonomy/circuits.hpp"

#include <cmath>
#include <cstdlib>

namespace anholonomy {

QubitBasis QubitBasis::standard() {
  QubitBasis b;
  b.v0 << Complex(1, 0), Complex(0, 0);
  b.v1 << Complex(0, 0), Complex(1, 0);
  return b;
}

QubitBasis QubitBasis::rotated(double angle) {
  QubitBasis b;
  b.v0 << Complex(std::cos(angle), 0), Complex(std::sin(angle), 0);
  b.v1 << Complex(-std::sin(angle), 0), Complex(std::cos(angle), 0);
  return b;
}

Eigen::Vector2cd QubitBasis::y() const {
  return (v0 - Complex(0, 1) * v1) / std::sqrt(2.0);
}

Eigen::Matrix2cd QubitBasis::y_projector() const {
  Eigen::Vector2cd yv = y();
  return yv * yv.adjoint();
}

Eigen::Matrix2cd QubitBasis::z_op() const {
  return v0 * v0.adjoint() - v1 * v1.adjoint();
}

Eigen::Matrix2cd QubitBasis::y_op() const {
  return Eigen::Matrix2cd::Identity() - 2.0 * y_projector();
}

void QubitBasis::validate(double tol) const {
  double dev = std::max({std::fabs(v0.norm() - 1.0), std::fabs(v1.norm() - 1.0),
                         std::abs(v0.dot(v1))});
  if (dev > tol) throw NotUnitaryError(dev);
}

void CircuitParams::validate() const {
  if (p.empty()) throw Error("circuit needs at least one qubit");
}

bool CircuitParams::all_odd() const {
  for (long long pj : p)
    if (pj % 2 == 0) return false;
  return true;
}

bool CircuitParams::degenerate_spectrum() const {
  for (std::size_t j = 1; j < p.size(); ++j)
    if (p[j] % 2 == 0) return true;
  return false;
}

void CycleSpec::validate() const {
  if (steps < 2) throw Error("cycle grid needs at least 2 steps");
}

namespace {

// e^{i(p-1)lambda}(1 - P_y) + e^{i lambda} P_y
Eigen::Matrix2cd phase_factor(double lambda, long long p, const QubitBasis& basis) {
  Eigen::Matrix2cd py = basis.y_projector();
  Complex outer = std::polar(1.0, static_cast<double>(p - 1) * lambda);
  Complex inner = std::polar(1.0, lambda);
  return outer * (Eigen::Matrix2cd::Identity() - py) + inner * py;
}

}  // namespace

Matrix build_u(double lambda, long long p, const QubitBasis& basis) {
  basis.validate();
  return phase_factor(lambda, p, basis) * basis.z_op();
}

Matrix build_uY(double lambda, long long p, const QubitBasis& basis) {
  basis.validate();
  return phase_factor(lambda, p, basis) * basis.y_op();
}

Matrix unitary_power(const Matrix& u, long long k) {
  if (!is_unitary(u, 1e-10)) throw NotUnitaryError(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())));
  Matrix base = k >= 0 ? u : Matrix(u.adjoint());
  unsigned long long e = static_cast<unsigned long long>(k >= 0 ? k : -k);
  Matrix acc = Matrix::Identity(u.rows(), u.cols());
  while (e != 0) {
    if (e & 1ULL) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Matrix controlled_gate(const Matrix& u, long long p, const QubitBasis& basis) {
  basis.validate();
  if (!is_unitary(u, 1e-10)) throw NotUnitaryError(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())));
  const long n = u.rows();
  Matrix upow = unitary_power(u, p - 1);
  Eigen::Matrix2cd py = basis.y_projector();
  Eigen::Matrix2cd pz = Eigen::Matrix2cd::Identity() - py;

  // kron over the 2x2 control blocks: control factor is leftmost.
  Matrix out(2 * n, 2 * n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out.block(a * n, b * n, n, n) = pz(a, b) * upow + py(a, b) * u;
  return out;
}

Matrix build_UN(double lambda, const CircuitParams& params, const QubitBasis& basis, int max_qubits) {
  params.validate();
  if (params.qubits() > max_qubits)
    throw DimensionOverflowError("circuit of " + std::to_string(params.qubits()) +
                                 " qubits exceeds the cap of " + std::to_string(max_qubits));
  const Eigen::Matrix2cd z = basis.z_op();
  Matrix u = build_u(lambda, params.p[0], basis);
  for (int j = 1; j < params.qubits(); ++j) {
    const long n = u.rows();
    u = controlled_gate(u, params.p[static_cast<std::size_t>(j)], basis);
    // the step map also rotates the new control qubit: D_p[U] = C^y_p[U] (Z x 1)
    Matrix zfull(2 * n, 2 * n);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        zfull.block(a * n, b * n, n, n) = z(a, b) * Matrix::Identity(n, n);
    u = u * zfull;
  }
  return u;
}

}  // namespace anholonomy
