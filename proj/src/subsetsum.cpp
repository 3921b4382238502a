#include "anholonomy/subsetsum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace anholonomy {

std::vector<WideInt> ladder_weights(const CircuitParams& params) {
  params.validate();
  for (long long pj : params.p)
    if (pj <= 0) throw NonPositiveParamsError("ladder weights need every p_j positive");
  const int n = params.qubits();
  std::vector<WideInt> w(static_cast<std::size_t>(n));
  WideInt suffix = 1;
  for (int j = n; j >= 1; --j) {
    w[static_cast<std::size_t>(j - 1)] = suffix * WideInt::pow2(j - 1);
    suffix *= WideInt(params.p[static_cast<std::size_t>(j - 1)]);
  }
  return w;
}

SubsetSumInstance instance_from_params(const CircuitParams& params, WideInt target, bool modular) {
  SubsetSumInstance inst;
  inst.weights = ladder_weights(params);
  inst.target = target;
  if (modular) inst.modulus = WideInt::pow2(params.qubits());
  return inst;
}

std::vector<QuantumNumbers> decode(const CircuitParams& params, WideInt m, bool modular) {
  params.validate();
  const int n = params.qubits();
  if (n > 20) throw InstanceTooLargeError("decode enumerates 2^N tuples; 20 qubits is the cap");
  // Per-bit contributions of the position map m = sum_j w_j n_j.  Unlike
  // ladder_weights these may be zero or negative for exotic p, so they are
  // built inline without the positivity check.
  std::vector<WideInt> w(static_cast<std::size_t>(n), WideInt(0));
  WideInt suffix = 1;
  for (int j = n; j >= 1; --j) {
    w[static_cast<std::size_t>(j - 1)] = suffix * WideInt::pow2(j - 1);
    suffix *= WideInt(params.p[static_cast<std::size_t>(j - 1)]);
  }
  const WideInt wanted = modular ? m.mod_pow2(n) : m;
  // Subset sums for every mask, each from the mask with its lowest bit
  // cleared plus that bit's weight.
  std::vector<WideInt> sums(1ULL << n, WideInt(0));
  std::vector<QuantumNumbers> hits;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    if (mask != 0)
      sums[mask] = sums[mask & (mask - 1)] +
                   w[static_cast<std::size_t>(std::countr_zero(mask))];
    const WideInt value = modular ? sums[mask].mod_pow2(n) : sums[mask];
    if (value == wanted) hits.push_back(QuantumNumbers::from_index(n, mask));
  }
  return hits;
}

double spectral_gap(const CircuitParams& params) {
  params.validate();
  if (params.degenerate_spectrum())
    throw DegenerateSpectrumError("rung spacing collapses when some p_j (j >= 2) is even");
  return kTwoPi / std::ldexp(1.0, params.qubits());
}

SubsetSumTable::SubsetSumTable(const std::vector<WideInt>& weights, WideInt max_target) {
  if (max_target < WideInt(0)) throw Error("negative target range");
  for (const WideInt& w : weights)
    if (w <= WideInt(0)) throw Error("reachability table needs positive weights");
  max_t_ = max_target.to_int64();
  const long long n = static_cast<long long>(weights.size());
  cells_ = (n + 1) * (max_t_ + 1);
  if (cells_ > (1LL << 30))
    throw InstanceTooLargeError("reachability table of " + std::to_string(cells_) +
                                " cells exceeds the 2^30 cap");
  w_.reserve(weights.size());
  for (const WideInt& w : weights) w_.push_back(w.to_int64());

  const std::size_t words = static_cast<std::size_t>(max_t_ / 64 + 1);
  rows_.assign(static_cast<std::size_t>(n) + 1, std::vector<std::uint64_t>(words, 0));
  rows_[0][0] = 1;  // empty subset reaches 0
  for (std::size_t j = 1; j <= static_cast<std::size_t>(n); ++j) {
    const long long shift = w_[j - 1];
    const std::vector<std::uint64_t>& prev = rows_[j - 1];
    std::vector<std::uint64_t>& cur = rows_[j];
    cur = prev;
    if (shift <= max_t_) {
      const std::size_t word_shift = static_cast<std::size_t>(shift / 64);
      const int bit_shift = static_cast<int>(shift % 64);
      for (std::size_t i = words; i-- > word_shift;) {
        std::uint64_t v = prev[i - word_shift] << bit_shift;
        if (bit_shift != 0 && i > word_shift)
          v |= prev[i - word_shift - 1] >> (64 - bit_shift);
        cur[i] |= v;
      }
    }
  }
}

bool SubsetSumTable::row_bit(std::size_t row, long long t) const {
  if (t < 0 || t > max_t_) return false;
  return (rows_[row][static_cast<std::size_t>(t / 64)] >> (t % 64)) & 1ULL;
}

bool SubsetSumTable::feasible(WideInt t) const {
  if (t < WideInt(0) || t > WideInt(max_t_)) return false;
  return row_bit(rows_.size() - 1, t.to_int64());
}

std::vector<int> SubsetSumTable::reconstruct(WideInt target) const {
  if (!feasible(target)) throw Error("target is not reachable");
  long long t = target.to_int64();
  std::vector<int> picks;
  for (std::size_t j = rows_.size() - 1; j >= 1; --j) {
    if (row_bit(j - 1, t)) continue;  // reachable without item j
    picks.push_back(static_cast<int>(j) - 1);
    t -= w_[j - 1];
  }
  if (t != 0) throw Error("reconstruction lost the target");
  std::reverse(picks.begin(), picks.end());
  return picks;
}

namespace {

std::vector<std::vector<int>> solve_modular(const SubsetSumInstance& instance, SolveMethod method);

std::vector<std::vector<int>> solve_plain(const SubsetSumInstance& instance, SolveMethod method) {
  const std::size_t n = instance.weights.size();
  if (method == SolveMethod::brute) {
    if (n > 24) throw InstanceTooLargeError("brute enumeration is capped at 24 items");
    std::vector<std::vector<int>> solutions;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      WideInt sum = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (mask & (1ULL << j)) sum += instance.weights[j];
      if (sum == instance.target) {
        std::vector<int> picks;
        for (std::size_t j = 0; j < n; ++j)
          if (mask & (1ULL << j)) picks.push_back(static_cast<int>(j));
        solutions.push_back(std::move(picks));
      }
    }
    return solutions;
  }
  if (instance.target < WideInt(0)) return {};
  WideInt total = 0;
  for (const WideInt& w : instance.weights) total += w;
  if (instance.target > total) return {};
  SubsetSumTable table(instance.weights, instance.target);
  if (!table.feasible(instance.target)) return {};
  return {table.reconstruct(instance.target)};
}

std::vector<std::vector<int>> solve_modular(const SubsetSumInstance& instance, SolveMethod method) {
  const WideInt mod = *instance.modulus;
  if (mod <= WideInt(0)) throw Error("modulus must be positive");
  const std::size_t n = instance.weights.size();
  const long long m = mod.to_int64();
  auto reduce = [&](const WideInt& x) { return x.mod_euclid(mod).to_int64(); };
  const long long wanted = reduce(instance.target);

  if (method == SolveMethod::brute) {
    if (n > 24) throw InstanceTooLargeError("brute enumeration is capped at 24 items");
    std::vector<std::vector<int>> solutions;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      long long sum = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (mask & (1ULL << j)) sum = (sum + reduce(instance.weights[j])) % m;
      if (sum == wanted) {
        std::vector<int> picks;
        for (std::size_t j = 0; j < n; ++j)
          if (mask & (1ULL << j)) picks.push_back(static_cast<int>(j));
        solutions.push_back(std::move(picks));
      }
    }
    return solutions;
  }

  // Reachable residues, row by row; the table is (n+1) x m.
  if (static_cast<long long>(n + 1) * m > (1LL << 30))
    throw InstanceTooLargeError("residue table exceeds the 2^30 cell cap");
  std::vector<std::vector<char>> reach(n + 1, std::vector<char>(static_cast<std::size_t>(m), 0));
  reach[0][0] = 1;
  for (std::size_t j = 1; j <= n; ++j) {
    const long long wj = reduce(instance.weights[j - 1]);
    for (long long t = 0; t < m; ++t)
      reach[j][static_cast<std::size_t>(t)] =
          reach[j - 1][static_cast<std::size_t>(t)] |
          reach[j - 1][static_cast<std::size_t>(((t - wj) % m + m) % m)];
  }
  if (!reach[n][static_cast<std::size_t>(wanted)]) return {};
  std::vector<int> picks;
  long long t = wanted;
  for (std::size_t j = n; j >= 1; --j) {
    if (reach[j - 1][static_cast<std::size_t>(t)]) continue;
    picks.push_back(static_cast<int>(j) - 1);
    t = ((t - reduce(instance.weights[j - 1])) % m + m) % m;
  }
  if (t != 0) throw Error("modular reconstruction lost the target");
  std::reverse(picks.begin(), picks.end());
  return {picks};
}

}  // namespace

std::vector<std::vector<int>> solve_subset_sum(const SubsetSumInstance& instance, SolveMethod method) {
  if (instance.modulus.has_value()) return solve_modular(instance, method);
  return solve_plain(instance, method);
}

}  // namespace anholonomy
