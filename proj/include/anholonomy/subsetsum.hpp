#pragma once

#include <optional>
#include <vector>

#include "anholonomy/spectral.hpp"

namespace anholonomy {

struct NonPositiveParamsError : Error {
  using Error::Error;
};

struct InstanceTooLargeError : Error {
  using Error::Error;
};

// Reading off an eigenstate's labels from its ladder position m is a
// subset-sum question over these weights: m = sum_j w_j n_j with
// w_j = (prod_{k>j} p_k) 2^{j-1}.  Requires every p_j positive.
std::vector<WideInt> ladder_weights(const CircuitParams& params);

struct SubsetSumInstance {
  std::vector<WideInt> weights;
  WideInt target;
  std::optional<WideInt> modulus;  // set when only the residue matters
};

SubsetSumInstance instance_from_params(const CircuitParams& params, WideInt target, bool modular);

// All label tuples whose ladder position equals m (modular: equals m mod 2^N).
// Exhaustive over the 2^N tuples; capped at 20 qubits.
std::vector<QuantumNumbers> decode(const CircuitParams& params, WideInt m, bool modular);

enum class SolveMethod { brute, dp };

// Exact solve.  brute enumerates every subset (at most 24 items) and
// returns all solutions; dp builds the pseudo-polynomial reachability
// table (cell count capped at 2^30) and returns one solution or none.
// An instance with a modulus is solved on residues instead of plain sums.
std::vector<std::vector<int>> solve_subset_sum(const SubsetSumInstance& instance, SolveMethod method);

// Adjacent-rung spacing of the nondegenerate ladder: exactly 2 pi / 2^N.
// Throws DegenerateSpectrumError when some p_j (j >= 2) is even.
double spectral_gap(const CircuitParams& params);

// Subset-sum reachability of every target in [0, max_target], row by row
// over the items; kept public so sweeps over many targets reuse one fill.
class SubsetSumTable {
 public:
  SubsetSumTable(const std::vector<WideInt>& weights, WideInt max_target);
  bool feasible(WideInt t) const;
  // One solution (ascending item indices); t must be feasible.
  std::vector<int> reconstruct(WideInt t) const;
  long long cells() const { return cells_; }

 private:
  bool row_bit(std::size_t row, long long t) const;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<long long> w_;
  long long max_t_ = 0;
  long long cells_ = 0;
};

}  // namespace anholonomy
