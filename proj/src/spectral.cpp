#include "anholonomy/spectral.hpp"

#include <cmath>

namespace anholonomy {

int QuantumNumbers::bit(int j) const {
  return bits.at(static_cast<std::size_t>(qubits() - j));
}

void QuantumNumbers::set_bit(int j, int value) {
  bits.at(static_cast<std::size_t>(qubits() - j)) = static_cast<std::uint8_t>(value & 1);
}

QuantumNumbers QuantumNumbers::zeros(int n) {
  QuantumNumbers q;
  q.bits.assign(static_cast<std::size_t>(n), 0);
  return q;
}

QuantumNumbers QuantumNumbers::from_index(int n, std::uint64_t t) {
  QuantumNumbers q = zeros(n);
  for (int j = 1; j <= n; ++j) q.set_bit(j, static_cast<int>((t >> (j - 1)) & 1ULL));
  return q;
}

std::uint64_t QuantumNumbers::index() const {
  std::uint64_t t = 0;
  for (int j = 1; j <= qubits(); ++j)
    if (bit(j)) t |= (1ULL << (j - 1));
  return t;
}

std::string QuantumNumbers::str() const {
  std::string s;
  s.reserve(bits.size());
  for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

namespace {

// suffix[j] = p_{j+1} p_{j+2} ... p_N  (suffix[N] = 1), exact.
std::vector<WideInt> suffix_products(const CircuitParams& params) {
  const int n = params.qubits();
  std::vector<WideInt> suffix(static_cast<std::size_t>(n) + 1);
  suffix[static_cast<std::size_t>(n)] = 1;
  for (int j = n - 1; j >= 1; --j)
    suffix[static_cast<std::size_t>(j)] =
        WideInt(params.p[static_cast<std::size_t>(j)]) * suffix[static_cast<std::size_t>(j) + 1];
  return suffix;
}

}  // namespace

PrincipalNumber principal_number(const CircuitParams& params, const QuantumNumbers& n) {
  params.validate();
  if (n.qubits() != params.qubits()) throw Error("label width does not match circuit size");
  auto suffix = suffix_products(params);
  WideInt m = 0;
  for (int j = 1; j <= params.qubits(); ++j)
    if (n.bit(j)) m += suffix[static_cast<std::size_t>(j)] * WideInt::pow2(j - 1);
  return PrincipalNumber{m, params.qubits()};
}

WideInt slope(const CircuitParams& params) {
  params.validate();
  WideInt d = 1;
  for (long long pj : params.p) d *= WideInt(pj);
  return d;
}

double eigenangle(const CircuitParams& params, const QuantumNumbers& n, double lambda) {
  PrincipalNumber m = principal_number(params, n);
  WideInt d = slope(params);
  return (kTwoPi * m.m.to_double() + d.to_double() * lambda) / std::ldexp(1.0, params.qubits());
}

Vector eigenvector(const CircuitParams& params, const QuantumNumbers& n, double lambda) {
  params.validate();
  if (n.qubits() != params.qubits()) throw Error("label width does not match circuit size");
  Vector full(1);
  full(0) = Complex(1, 0);
  WideInt m_prev = 0, d_prev = 1;
  for (int j = 1; j <= params.qubits(); ++j) {
    const long long pj = params.p[static_cast<std::size_t>(j - 1)];
    const double theta_prev =
        (kTwoPi * m_prev.to_double() + d_prev.to_double() * lambda) / std::ldexp(1.0, j - 1);
    const double alpha = static_cast<double>(2 - pj) * theta_prev / 4.0;
    const double c = std::cos(alpha), s = std::sin(alpha);
    // n_j = 0: (cos, sin); n_j = 1: (-sin, cos).  Both real, and both
    // solve the transport condition <n|d/dlambda|n> = 0 along the cycle.
    const double f0 = n.bit(j) ? -s : c;
    const double f1 = n.bit(j) ? c : s;
    Vector next(2 * full.size());
    next.head(full.size()) = f0 * full;
    next.tail(full.size()) = f1 * full;
    full.swap(next);
    m_prev = WideInt::pow2(j - 1) * WideInt(n.bit(j)) + WideInt(pj) * m_prev;
    d_prev = WideInt(pj) * d_prev;
  }
  return full;
}

SrStep sr_single(int n, WideInt q) {
  if (n != 0 && n != 1) throw Error("sr_single expects a bit");
  WideInt total = WideInt(n) + q;
  return SrStep{total.mod2(), total.floor_div2()};
}

SrResult sr_full(const CircuitParams& params, const QuantumNumbers& n) {
  params.validate();
  if (n.qubits() != params.qubits()) throw Error("label width does not match circuit size");
  SrResult out;
  out.s = QuantumNumbers::zeros(params.qubits());
  out.partial_r.reserve(static_cast<std::size_t>(params.qubits()));
  WideInt r = 1;  // so that level 1 sees q = p_1
  for (int j = 1; j <= params.qubits(); ++j) {
    SrStep step = sr_single(n.bit(j), WideInt(params.p[static_cast<std::size_t>(j - 1)]) * r);
    out.s.set_bit(j, step.s);
    r = step.r;
    out.partial_r.push_back(r);
  }
  out.r = r;
  return out;
}

AnholonomyData permutation_matrix(const CircuitParams& params, bool require_bits) {
  params.validate();
  const int n = params.qubits();
  if (n > 20) throw Error("permutation tables above 20 qubits are not materialized");
  const std::uint64_t dim = 1ULL << n;
  const long long shift = slope(params).mod_pow2(n).to_int64();

  std::vector<int> shift_image(dim);
  for (std::uint64_t m = 0; m < dim; ++m)
    shift_image[m] = static_cast<int>((m + static_cast<std::uint64_t>(shift)) & (dim - 1));

  AnholonomyData data{Permutation(std::move(shift_image)), false, Permutation::identity(1), {}};

  data.winding.resize(dim);
  std::vector<int> bit_image(dim);
  for (std::uint64_t t = 0; t < dim; ++t) {
    SrResult sr = sr_full(params, QuantumNumbers::from_index(n, t));
    data.winding[t] = sr.r;
    bit_image[t] = static_cast<int>(sr.s.index());
  }

  if (!params.degenerate_spectrum()) {
    data.has_bit_permutation = true;
    data.bit_permutation = Permutation(std::move(bit_image));
  } else if (require_bits) {
    throw DegenerateSpectrumError("bit labels do not map 1:1 onto ladder residues (even p_j above slot 1)");
  }
  return data;
}

QuantumNumbers labels_from_residue(const CircuitParams& params, std::uint64_t residue) {
  params.validate();
  if (params.degenerate_spectrum())
    throw DegenerateSpectrumError("residue decoding needs p_2..p_N odd");
  const int n = params.qubits();
  if (n < 64 && residue >= (1ULL << n)) throw Error("residue out of range");
  auto suffix = suffix_products(params);
  QuantumNumbers out = QuantumNumbers::zeros(n);
  WideInt x(static_cast<long long>(residue));
  for (int j = 1; j <= n; ++j) {
    int nj = x.mod2();
    out.set_bit(j, nj);
    x = (x - suffix[static_cast<std::size_t>(j)] * WideInt(nj)).mod_pow2(n - j + 1).floor_div2();
  }
  return out;
}

std::vector<QuantumNumbers> itinerary(const CircuitParams& params, const QuantumNumbers& start,
                                      int count) {
  params.validate();
  if (params.degenerate_spectrum())
    throw DegenerateSpectrumError("itineraries need a nondegenerate ladder (p_2..p_N odd)");
  if (start.qubits() != params.qubits()) throw Error("label width does not match circuit size");
  if (count < 0) throw Error("itinerary length must be nonnegative");
  std::vector<QuantumNumbers> path;
  path.reserve(static_cast<std::size_t>(count) + 1);
  path.push_back(start);
  for (int k = 0; k < count; ++k) path.push_back(sr_full(params, path.back()).s);
  return path;
}

namespace {

// Product n_hi n_{hi-1} ... n_lo; empty (hi < lo) products are 1.
int bit_product(const QuantumNumbers& n, int lo, int hi) {
  for (int j = lo; j <= hi; ++j)
    if (!n.bit(j)) return 0;
  return 1;
}

void check_family(const CircuitParams& params, const FamilySpec& spec) {
  const int n = params.qubits();
  switch (spec.family) {
    case Family::simplest:
      for (long long pj : params.p)
        if (pj != 1) throw FamilyMismatchError("simplest family means p_j = 1 everywhere");
      return;
    case Family::even_first:
      if (params.p[0] != 2) throw FamilyMismatchError("even_first family means p_1 = 2");
      for (std::size_t j = 1; j < params.p.size(); ++j)
        if (params.p[j] != 1) throw FamilyMismatchError("even_first family means p_j = 1 above slot 1");
      return;
    case Family::impurity: {
      if (spec.J < 1 || spec.J > n) throw FamilyMismatchError("impurity slot J out of range");
      if (spec.K < 1 || spec.K > 60) throw FamilyMismatchError("impurity strength K out of range");
      const long long expected = 1LL + (1LL << spec.K);
      for (int j = 1; j <= n; ++j) {
        long long pj = params.p[static_cast<std::size_t>(j - 1)];
        if (j == spec.J ? pj != expected : pj != 1)
          throw FamilyMismatchError("params are not an impurity family with the given (J, K)");
      }
      return;
    }
  }
  throw FamilyMismatchError("unknown family");
}

// Flip condition for bit j of the successor, per family.
bool flips(const QuantumNumbers& n, int j, const FamilySpec& spec) {
  switch (spec.family) {
    case Family::simplest:
      return bit_product(n, 1, j - 1) == 1;
    case Family::even_first:
      if (j == 1) return false;
      return bit_product(n, 2, j - 1) == 1;
    case Family::impurity: {
      const int J = spec.J, K = spec.K;
      if (j < J + K) return bit_product(n, 1, j - 1) == 1;
      if (j == J + K) return bit_product(n, J, J + K - 1) == 0 && bit_product(n, 1, J - 1) == 1;
      const int t = n.bit(J + K) != 0 ? 1 : bit_product(n, J, J + K - 1);
      return bit_product(n, J + K + 1, j - 1) == 1 && t == 1 && bit_product(n, 1, J - 1) == 1;
    }
  }
  return false;
}

WideInt closed_form_r(const CircuitParams& params, const QuantumNumbers& n, const FamilySpec& spec) {
  const int N = params.qubits();
  switch (spec.family) {
    case Family::simplest:
      return WideInt(bit_product(n, 1, N));
    case Family::even_first:
      if (N == 1) return WideInt(1);
      return WideInt(bit_product(n, 2, N));
    case Family::impurity: {
      const int J = spec.J, K = spec.K;
      if (N < J) return WideInt(bit_product(n, 1, N));
      if (N < J + K)
        return (WideInt(bit_product(n, J, N)) + WideInt::pow2(K - (N - J) - 1)) *
               WideInt(bit_product(n, 1, J - 1));
      const int t = n.bit(J + K) != 0 ? 1 : bit_product(n, J, J + K - 1);
      return WideInt(bit_product(n, J + K + 1, N)) * WideInt(t) * WideInt(bit_product(n, 1, J - 1));
    }
  }
  return WideInt(0);
}

}  // namespace

SrPair closed_form_sr(const CircuitParams& params, const QuantumNumbers& n,
                      const FamilySpec& spec) {
  params.validate();
  if (n.qubits() != params.qubits()) throw Error("label width does not match circuit size");
  check_family(params, spec);
  SrPair out;
  out.s = QuantumNumbers::zeros(params.qubits());
  for (int j = 1; j <= params.qubits(); ++j)
    out.s.set_bit(j, flips(n, j, spec) ? 1 - n.bit(j) : n.bit(j));
  out.r = closed_form_r(params, n, spec);
  return out;
}

}  // namespace anholonomy
