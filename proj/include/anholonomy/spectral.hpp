#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anholonomy/circuits.hpp"
#include "anholonomy/core.hpp"
#include "anholonomy/wide_int.hpp"

namespace anholonomy {

struct DegenerateSpectrumError : Error {
  using Error::Error;
};

struct FamilyMismatchError : Error {
  using Error::Error;
};

// Bit labels (n_N, ..., n_1) of one eigenstate, stored most significant
// first: bits[0] = n_N.  The tensor index places qubit N leftmost, so
// index() is the row of the eigenvector in the full Hilbert space.
struct QuantumNumbers {
  std::vector<std::uint8_t> bits;

  int qubits() const { return static_cast<int>(bits.size()); }
  int bit(int j) const;  // n_j for j in 1..N
  void set_bit(int j, int value);
  static QuantumNumbers zeros(int n);
  static QuantumNumbers from_index(int n, std::uint64_t t);
  std::uint64_t index() const;
  std::string str() const;  // "n_N ... n_1", e.g. "011"

  friend bool operator==(const QuantumNumbers& a, const QuantumNumbers& b) {
    return a.bits == b.bits;
  }
};

// Ladder label m_N with its modulus 2^N.  The integer itself is kept
// unreduced; residue() folds it into [0, 2^N).
struct PrincipalNumber {
  WideInt m;
  int qubits = 0;

  WideInt modulus() const { return WideInt::pow2(qubits); }
  WideInt residue() const { return m.mod_pow2(qubits); }
};

// m_N = 2^{N-1} n_N + sum_{j<N} (prod_{k>j} p_k) 2^{j-1} n_j, exact.
PrincipalNumber principal_number(const CircuitParams& params, const QuantumNumbers& n);

// d_N = p_1 p_2 ... p_N, exact.
WideInt slope(const CircuitParams& params);

// theta(n; lambda) = (2 pi / 2^N) (m_N + d_N lambda / 2 pi), unreduced
// (the multi-sheet value; reduce mod 2 pi to compare with eigenphases).
double eigenangle(const CircuitParams& params, const QuantumNumbers& n, double lambda);

// Eigenvector of U^(N)(lambda) with labels n, assembled as the tensor
// product of one-qubit factors evaluated at the partial angles
// theta^{(j-1)}(m_{j-1}; lambda).  All components are real.
Vector eigenvector(const CircuitParams& params, const QuantumNumbers& n, double lambda);

// One elementary split: s = (n + q) mod 2, r = floor((n + q) / 2).
// floor (the greatest integer <= x) keeps n + q = s + 2 r exact at even
// arguments, which the balance identity below needs.
struct SrStep {
  int s;
  WideInt r;
};
SrStep sr_single(int n, WideInt q);

// Successor labels and winding integer after one cycle:
// theta(n; lambda + 2 pi) = theta(s(n); lambda) + 2 pi r(n).
// partial_r[k-1] = r^{(k)} of the k lowest qubits; r = partial_r.back().
struct SrResult {
  QuantumNumbers s;
  WideInt r;
  std::vector<WideInt> partial_r;
};
SrResult sr_full(const CircuitParams& params, const QuantumNumbers& n);

// One-cycle permutation data.  On ladder residues the successor map is
// always the rigid shift m -> m + d_N mod 2^N.  The bit-label picture
// exists only while n <-> m is a bijection (p_2..p_N odd); requesting it
// otherwise throws DegenerateSpectrumError.
struct AnholonomyData {
  Permutation shift_m;
  bool has_bit_permutation = false;
  Permutation bit_permutation;     // over tensor indices; valid if has_bit_permutation
  std::vector<WideInt> winding;    // r^{(N)} per tensor index (always defined)
};
AnholonomyData permutation_matrix(const CircuitParams& params, bool require_bits = false);

// Inverse of n -> m_N mod 2^N (requires p_2..p_N odd).
QuantumNumbers labels_from_residue(const CircuitParams& params, std::uint64_t residue);

// Orbit of `start` under the successor map: count+1 entries, starting and
// (for count = cycle length) ending at `start`.
std::vector<QuantumNumbers> itinerary(const CircuitParams& params, const QuantumNumbers& start,
                                      int count);

// The three parameter families with closed-form successor data.
//   simplest:  all p_j = 1
//   even_first: p_1 = 2, the rest 1
//   impurity:  p_j = 1 except p_J = 1 + 2^K
enum class Family { simplest, even_first, impurity };

struct FamilySpec {
  Family family = Family::simplest;
  int J = 0;
  int K = 0;
};

struct SrPair {
  QuantumNumbers s;
  WideInt r;
};

// Closed-form successor/winding for the family; throws FamilyMismatchError
// when params do not belong to it.  Independent of sr_full by construction:
// only bit products and the family case split are used.
SrPair closed_form_sr(const CircuitParams& params, const QuantumNumbers& n,
                      const FamilySpec& spec);

}  // namespace anholonomy
