#pragma once

#include <vector>

#include "anholonomy/core.hpp"
#include "anholonomy/wide_int.hpp"

namespace anholonomy {

struct DimensionOverflowError : Error {
  using Error::Error;
};

// Orthonormal single-qubit pair (v0, v1) fixing the gate family's axes.
// It induces the phase projector direction y = (v0 - i v1)/sqrt(2) and the
// reference gate Z' = v0 v0^dag - v1 v1^dag.  The default pair is the
// computational basis, giving the standard |y> and diag(1, -1).
struct QubitBasis {
  Eigen::Vector2cd v0;
  Eigen::Vector2cd v1;

  static QubitBasis standard();
  // Real rotation of the standard pair by `angle`; handy for probing how
  // the invariants respond to deforming the construction axes.
  static QubitBasis rotated(double angle);

  Eigen::Vector2cd y() const;                 // (v0 - i v1)/sqrt(2)
  Eigen::Matrix2cd y_projector() const;       // |y><y|
  Eigen::Matrix2cd z_op() const;              // v0 v0^dag - v1 v1^dag
  Eigen::Matrix2cd y_op() const;              // 1 - 2 |y><y|
  void validate(double tol = 1e-12) const;    // orthonormality
};

// Parameters (p_1, ..., p_N) of an N-qubit circuit family.  p[j-1] = p_j.
struct CircuitParams {
  std::vector<long long> p;

  int qubits() const { return static_cast<int>(p.size()); }
  void validate() const;                      // at least one qubit
  bool all_odd() const;
  // The ladder-label map n -> m_N mod 2^N is a bijection exactly when
  // p_2, ..., p_N are all odd; an even entry above the first slot folds
  // distinct labels together and the spectrum degenerates at every lambda.
  bool degenerate_spectrum() const;
  // One cycle shifts residues by d = prod p_j, a single 2^N-cycle exactly
  // when d is odd, i.e. when every p_j is odd.
  bool single_cycle() const { return all_odd(); }
};

// Uniform grid over one parameter cycle: lambda_k = 2 pi k / steps,
// k = 0..steps (both endpoints included).
struct CycleSpec {
  int steps = 1024;

  void validate() const;
  int points() const { return steps + 1; }
  double lambda(int k) const { return kTwoPi * static_cast<double>(k) / steps; }
};

// One-qubit gate u(lambda, p) = [e^{i(p-1)lambda}(1 - P_y) + e^{i lambda} P_y] Z'.
// The exponent splits over the orthogonal projectors, so the closed form
// above is exact; no matrix exponential is involved.
Matrix build_u(double lambda, long long p, const QubitBasis& basis = QubitBasis::standard());

// Variant with the reference gate Z' replaced by Y' = 1 - 2 P_y.  Its
// eigenvectors are lambda-independent and its eigenvalues e^{i(p-1)lambda}
// and -e^{i lambda} cross on the cycle wherever (p-2) lambda = pi mod 2 pi.
Matrix build_uY(double lambda, long long p, const QubitBasis& basis = QubitBasis::standard());

// Generalized controlled gate C^y_p[U] = (1 - P_y) x U^{p-1} + P_y x U.
// The fresh control qubit is the leftmost (most significant) tensor factor;
// the |y> control line gets U, its complement gets U^{p-1}.  Requires U
// unitary.  The hierarchy step additionally applies (Z' x 1); that factor
// lives in build_UN, not here.
Matrix controlled_gate(const Matrix& u, long long p, const QubitBasis& basis = QubitBasis::standard());

// Hierarchical N-qubit circuit: U^(1) = u(lambda, p_1) and
// U^(N) = C^y_{p_N}[U^(N-1)] (Z' x 1).  Qubit N is the leftmost factor.
// Throws DimensionOverflowError when params.qubits() > max_qubits.
Matrix build_UN(double lambda, const CircuitParams& params,
                const QubitBasis& basis = QubitBasis::standard(), int max_qubits = 8);

// U^k for integer k (negative powers via the adjoint); U must be unitary.
Matrix unitary_power(const Matrix& u, long long k);

}  // namespace anholonomy
