#include "anholonomy/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace anholonomy {

void HolonomyMatrix::validate(double tol) const {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error("holonomy matrix must be square");
  if (!is_unitary(m, std::max(tol, 1e-8))) throw NotUnitaryError(max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())));
  const int n = static_cast<int>(m.rows());
  std::vector<char> row_used(static_cast<std::size_t>(n), 0);
  for (int col = 0; col < n; ++col) {
    int hits = 0, row_hit = -1;
    for (int row = 0; row < n; ++row) {
      double a = std::abs(m(row, col));
      if (std::fabs(a - 1.0) <= tol) {
        ++hits;
        row_hit = row;
      } else if (a > tol) {
        throw Error("holonomy entry of intermediate modulus at (" + std::to_string(row) + ", " +
                    std::to_string(col) + ")");
      }
    }
    if (hits != 1) throw Error("holonomy column " + std::to_string(col) + " lacks a single unimodular entry");
    if (row_used[static_cast<std::size_t>(row_hit)])
      throw Error("holonomy row " + std::to_string(row_hit) + " hit twice");
    row_used[static_cast<std::size_t>(row_hit)] = 1;
  }
}

Permutation HolonomyMatrix::permutation(double tol) const {
  validate(tol);
  const int n = static_cast<int>(m.rows());
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int col = 0; col < n; ++col) {
    int best = 0;
    for (int row = 1; row < n; ++row)
      if (std::abs(m(row, col)) > std::abs(m(best, col))) best = row;
    image[static_cast<std::size_t>(col)] = best;
  }
  return Permutation(std::move(image));
}

Vector HolonomyMatrix::sigma(double tol) const {
  Permutation perm = permutation(tol);
  Vector out(m.rows());
  for (int col = 0; col < m.cols(); ++col) out(col) = m(perm(col), col);
  return out;
}

HolonomyMatrix holonomy_single(long long p) {
  Matrix m = Matrix::Zero(2, 2);
  if (p % 2 == 0) {
    // cos(pi (2 - p) / 2) = (-1)^{(2 - p)/2}, no off-diagonal part.
    long long half = (2 - p) / 2;
    double sign = (half % 2 == 0) ? 1.0 : -1.0;
    m(0, 0) = sign;
    m(1, 1) = sign;
  } else {
    // -i Y sin(pi (2 - p) / 2): the sine is +1 when 2 - p = 1 mod 4.
    long long q = ((2 - p) % 4 + 4) % 4;  // 1 or 3
    double sign = (q == 1) ? 1.0 : -1.0;
    m(0, 1) = -sign;
    m(1, 0) = sign;
  }
  return HolonomyMatrix{m, "parallel-transport"};
}

int sigma_sign(const CircuitParams& params, const QuantumNumbers& n) {
  params.validate();
  if (!params.all_odd())
    throw OddParamsRequiredError("sigma sign sums need every p_j odd");
  SrResult sr = sr_full(params, n);
  int parity = 0;
  for (const WideInt& rk : sr.partial_r) parity ^= rk.odd() ? 1 : 0;
  return parity ? -1 : 1;
}

Matrix analytic_frame(const CircuitParams& params, double lambda) {
  params.validate();
  if (params.qubits() > 20) throw Error("frame too large to materialize");
  const int dim = 1 << params.qubits();
  Matrix frame(dim, dim);
  for (int m = 0; m < dim; ++m)
    frame.col(m) = eigenvector(params, labels_from_residue(params, static_cast<std::uint64_t>(m)), lambda);
  return frame;
}

HolonomyMatrix holonomy_analytic(const CircuitParams& params) {
  params.validate();
  if (!params.all_odd()) throw OddParamsRequiredError("analytic holonomy needs every p_j odd");
  const int n = params.qubits();
  if (n > 10) throw Error("analytic holonomy matrices above 10 qubits are not materialized");
  const int dim = 1 << n;
  const long long d_res = slope(params).mod_pow2(n).to_int64();

  // Route one: residue shift for the pattern, r-parity sums for the signs.
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    QuantumNumbers labels = labels_from_residue(params, static_cast<std::uint64_t>(m));
    int row = static_cast<int>((m + d_res) & (dim - 1));
    a(row, m) = sigma_sign(params, labels);
  }

  // Route two: level-by-level recursion over tensor indices.  Each level
  // splits off its own bit, carries the sign (-1)^{r_step}, and threads
  // the residual winding into the next level.
  std::vector<int> succ{0}, sign{1};
  std::vector<WideInt> rprev{WideInt(1)};  // level 0 seeds r = 1 so level 1 sees q = p_1
  for (int j = 1; j <= n; ++j) {
    const int low_dim = 1 << (j - 1);
    std::vector<int> succ_j(static_cast<std::size_t>(low_dim) * 2);
    std::vector<int> sign_j(static_cast<std::size_t>(low_dim) * 2);
    std::vector<WideInt> r_j(static_cast<std::size_t>(low_dim) * 2);
    for (int t = 0; t < 2 * low_dim; ++t) {
      const int low = t & (low_dim - 1);
      const int nj = t >> (j - 1);
      SrStep step = sr_single(nj, WideInt(params.p[static_cast<std::size_t>(j - 1)]) *
                                      rprev[static_cast<std::size_t>(low)]);
      succ_j[static_cast<std::size_t>(t)] =
          (step.s << (j - 1)) | (j == 1 ? 0 : succ[static_cast<std::size_t>(low)]);
      sign_j[static_cast<std::size_t>(t)] =
          (step.r.odd() ? -1 : 1) * (j == 1 ? 1 : sign[static_cast<std::size_t>(low)]);
      r_j[static_cast<std::size_t>(t)] = step.r;
    }
    succ.swap(succ_j);
    sign.swap(sign_j);
    rprev.swap(r_j);
  }
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(dim, dim);
  for (int t = 0; t < dim; ++t) {
    QuantumNumbers labels = QuantumNumbers::from_index(n, static_cast<std::uint64_t>(t));
    int col = static_cast<int>(principal_number(params, labels).residue().to_int64());
    QuantumNumbers succ_labels = QuantumNumbers::from_index(n, static_cast<std::uint64_t>(succ[static_cast<std::size_t>(t)]));
    int row = static_cast<int>(principal_number(params, succ_labels).residue().to_int64());
    b(row, col) = sign[static_cast<std::size_t>(t)];
  }

  if (a != b) throw Error("holonomy assembly routes disagree");

  HolonomyMatrix out{a.cast<Complex>(), "parallel-transport"};
  out.validate(0.0);
  return out;
}

namespace {

struct SweepFailure {
  double worst;
};

// One transport pass at a fixed step count.  Throws SweepFailure (internal)
// when the matching decays; the caller refines and retries.
NumericHolonomy sweep_once(const UnitaryFamily& family, int dim, int steps,
                           const Matrix* initial_frame, const SweepOptions& options) {
  Matrix u0 = family(0.0);
  if (u0.rows() != dim || u0.cols() != dim) throw Error("family dimension mismatch");
  if (!is_unitary(u0, options.unitary_tol))
    throw NotUnitaryError(max_abs(u0.adjoint() * u0 - Matrix::Identity(dim, dim)));
  {
    Matrix u_end = family(kTwoPi);
    double dev = max_abs(u_end - u0);
    if (dev > 1e-10)
      throw NotPeriodicError("family is not 2 pi periodic (deviation " + std::to_string(dev) + ")");
  }

  Matrix frame0;
  if (initial_frame != nullptr) {
    frame0 = *initial_frame;
    if (frame0.rows() != dim || frame0.cols() != dim) throw Error("initial frame dimension mismatch");
    for (int k = 0; k < dim; ++k) {
      Vector v = frame0.col(k);
      Complex ev = v.dot(u0 * v);  // Eigen's dot conjugates the left factor
      double res = (u0 * v - ev * v).cwiseAbs().maxCoeff();
      if (std::fabs(std::abs(ev) - 1.0) > 1e-8 || res > 1e-8)
        throw Error("initial frame column " + std::to_string(k) + " is not an eigenvector");
    }
  } else {
    frame0 = eig_unitary(u0, options.unitary_tol).vectors;
  }

  const double h = kTwoPi / steps;
  Matrix cur = frame0;
  SweepTrace trace;
  trace.steps_used = steps;
  trace.transport_phases = Eigen::VectorXd::Zero(dim);
  trace.lambdas.reserve(static_cast<std::size_t>(steps) + 1);
  trace.lambdas.push_back(0.0);
  if (options.keep_frames) trace.frames.push_back(cur);
  double worst = 1.0;

  for (int k = 1; k <= steps; ++k) {
    const double lambda = h * k;
    Matrix u = family(lambda);
    EigenFrame ef = eig_unitary(u, options.unitary_tol);
    double gap = ef.min_circular_gap();
    if (gap < options.degeneracy_tol)
      throw DegeneracyOnPathError(lambda - h, lambda + h, gap);

    Matrix overlap = cur.adjoint() * ef.vectors;
    std::vector<int> image(static_cast<std::size_t>(dim), -1);
    std::vector<char> used(static_cast<std::size_t>(dim), 0);
    for (int i = 0; i < dim; ++i) {
      int best = -1;
      double best_mag = -1.0;
      for (int j = 0; j < dim; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double mag = std::abs(overlap(i, j));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best_mag < options.overlap_threshold) throw SweepFailure{best_mag};
      image[static_cast<std::size_t>(i)] = best;
      used[static_cast<std::size_t>(best)] = 1;
      worst = std::min(worst, best_mag);
    }

    Matrix next(dim, dim);
    Eigen::VectorXd angles(dim);
    for (int i = 0; i < dim; ++i) {
      const int j = image[static_cast<std::size_t>(i)];
      Complex o = overlap(i, j);
      Complex phase = std::conj(o) / std::abs(o);
      next.col(i) = ef.vectors.col(j) * phase;
      trace.transport_phases[i] += std::arg(phase);
      angles[i] = ef.angles[j];
    }
    cur.swap(next);
    trace.lambdas.push_back(lambda);
    trace.path_angles.push_back(std::move(angles));
    trace.matchings.emplace_back(std::move(image));
    if (options.keep_frames) trace.frames.push_back(cur);
  }

  trace.worst_overlap = worst;
  NumericHolonomy out;
  out.matrix = HolonomyMatrix{frame0.adjoint() * cur,
                              initial_frame ? "parallel-transport" : "angle-sorted"};
  out.trace = std::move(trace);
  return out;
}

}  // namespace

NumericHolonomy holonomy_numeric(const UnitaryFamily& family, int dim, int steps,
                                 const Matrix* initial_frame, const SweepOptions& options) {
  if (steps < 2) throw Error("sweep needs at least 2 steps");
  double worst = 0.0;
  for (int attempt = 0; attempt <= options.max_refinements; ++attempt) {
    const int trial_steps = steps << attempt;
    NumericHolonomy result;
    try {
      result = sweep_once(family, dim, trial_steps, initial_frame, options);
    } catch (const SweepFailure& f) {
      worst = f.worst;
      continue;
    }
    try {
      result.matrix.validate();
    } catch (const Error&) {
      // A malformed matrix at this resolution reads as a matching failure;
      // refine unless this was the last attempt.
      if (attempt == options.max_refinements) throw;
      continue;
    }
    return result;
  }
  throw UnderResolvedError(worst);
}

HolonomyMatrix gauge_transform(const HolonomyMatrix& m, const std::vector<double>& phases) {
  if (static_cast<long>(phases.size()) != m.m.rows()) throw Error("gauge phase count mismatch");
  const int n = static_cast<int>(m.m.rows());
  Vector g(n);
  for (int k = 0; k < n; ++k) g(k) = std::polar(1.0, phases[static_cast<std::size_t>(k)]);
  Vector ginv = g.conjugate();
  Matrix out = ginv.asDiagonal() * m.m * g.asDiagonal();
  return HolonomyMatrix{out, m.gauge_tag + "+diag"};
}

std::vector<double> cycle_phases(const HolonomyMatrix& m, double tol) {
  Permutation perm = m.permutation(tol);
  Vector sig = m.sigma(tol);
  std::vector<double> gamma;
  for (const auto& cycle : cycle_decompose(perm)) {
    Complex prod(1, 0);
    for (int k : cycle) prod *= sig(k) / std::abs(sig(k));
    gamma.push_back(wrap_angle(std::arg(prod)));
  }
  return gamma;
}

CanonicalGauge canonical_gauge(const HolonomyMatrix& m, double tol) {
  Permutation perm = m.permutation(tol);
  Vector sig = m.sigma(tol);
  auto cycles = cycle_decompose(perm);
  const int n = static_cast<int>(m.m.rows());

  CanonicalGauge out;
  out.u_diag = Vector::Ones(n);
  for (const auto& cycle : cycles) {
    Complex prod(1, 0);
    for (int k : cycle) prod *= sig(k) / std::abs(sig(k));
    const double gamma = wrap_angle(std::arg(prod));
    out.gamma.push_back(gamma);
    const double step_phase = gamma / static_cast<double>(cycle.size());
    Complex u(1, 0);
    out.u_diag(cycle[0]) = u;
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
      int cur = cycle[i];
      u *= (sig(cur) / std::abs(sig(cur))) * std::polar(1.0, -step_phase);
      out.u_diag(cycle[i + 1]) = u;
    }
  }
  Vector uinv = out.u_diag.conjugate();
  out.canonical = uinv.asDiagonal() * m.m * out.u_diag.asDiagonal();
  return out;
}

std::vector<double> gamma_of_params(const CircuitParams& params, int steps, int max_qubits) {
  params.validate();
  if (params.degenerate_spectrum())
    throw DegeneracyOnPathError("the spectrum is degenerate at every lambda (even p_j above slot 1)");
  AnholonomyData data = permutation_matrix(params);
  if (params.all_odd()) {
    // Integer route: gamma per cycle is the parity of the sigma product.
    std::vector<double> gamma;
    for (const auto& cycle : cycle_decompose(data.shift_m)) {
      int product = 1;
      for (int m : cycle)
        product *= sigma_sign(params, labels_from_residue(params, static_cast<std::uint64_t>(m)));
      gamma.push_back(product < 0 ? kPi : 0.0);
    }
    return gamma;
  }
  const int dim = 1 << params.qubits();
  Matrix frame0 = analytic_frame(params, 0.0);
  UnitaryFamily family = [&params, max_qubits](double lambda) {
    return build_UN(lambda, params, QubitBasis::standard(), max_qubits);
  };
  NumericHolonomy numeric = holonomy_numeric(family, dim, steps, &frame0);
  return cycle_phases(numeric.matrix);
}

double berry_phase_extended_cycle(const UnitaryFamily& family, int dim, int steps_per_cycle,
                                  int cycles, int start_index, const Matrix* initial_frame,
                                  const SweepOptions& options) {
  if (steps_per_cycle < 2 || cycles < 1) throw Error("bad extended-cycle grid");
  if (start_index < 0 || start_index >= dim) throw Error("start index out of range");

  Matrix u0 = family(0.0);
  if (!is_unitary(u0, options.unitary_tol))
    throw NotUnitaryError(max_abs(u0.adjoint() * u0 - Matrix::Identity(dim, dim)));
  {
    double dev = max_abs(family(kTwoPi) - u0);
    if (dev > 1e-10)
      throw NotPeriodicError("family is not 2 pi periodic (deviation " + std::to_string(dev) + ")");
  }

  Vector v0 = initial_frame ? Vector(initial_frame->col(start_index))
                            : Vector(eig_unitary(u0, options.unitary_tol).vectors.col(start_index));

  // Overlap-product Berry phase: the eigensolver phases of intermediate
  // frames cancel between consecutive links, so no rephasing is needed.
  const int total = steps_per_cycle * cycles;
  const double h = kTwoPi / steps_per_cycle;
  Vector v = v0;
  double accum = 0.0;
  for (int k = 1; k <= total; ++k) {
    EigenFrame ef = eig_unitary(family(h * k), options.unitary_tol);
    if (ef.min_circular_gap() < options.degeneracy_tol)
      throw DegeneracyOnPathError(h * (k - 1), h * (k + 1), ef.min_circular_gap());
    int best = 0;
    double best_mag = -1.0;
    for (int j = 0; j < dim; ++j) {
      double mag = std::abs(Complex(v.dot(ef.vectors.col(j))));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    if (best_mag < options.overlap_threshold) throw UnderResolvedError(best_mag);
    accum += std::arg(Complex(v.dot(ef.vectors.col(best))));
    v = ef.vectors.col(best);
  }
  Complex closure = v.dot(v0);
  if (std::abs(closure) < options.overlap_threshold)
    throw NotClosedError("eigenpath did not return to the starting eigenspace after " +
                         std::to_string(cycles) + " cycles (overlap " +
                         std::to_string(std::abs(closure)) + ")");
  accum += std::arg(closure);
  return wrap_angle(-accum);
}

double winding_number_raw(const UnitaryFamily& family, int dim, int steps) {
  if (steps < 4) throw Error("winding quadrature needs at least 4 steps");
  Matrix u0 = family(0.0);
  if (u0.rows() != dim || u0.cols() != dim) throw Error("family dimension mismatch");
  if (!is_unitary(u0, 1e-10))
    throw NotUnitaryError(max_abs(u0.adjoint() * u0 - Matrix::Identity(dim, dim)));
  {
    double dev = max_abs(family(kTwoPi) - u0);
    if (dev > 1e-10)
      throw NotPeriodicError("family is not 2 pi periodic (deviation " + std::to_string(dev) + ")");
  }

  const double h = kTwoPi / steps;
  const bool cache = static_cast<long long>(steps) * dim * dim <= (1LL << 22);
  std::vector<Matrix> us;
  if (cache) {
    us.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) us.push_back(family(h * k));
  }
  auto at = [&](int k) -> Matrix {
    int kk = ((k % steps) + steps) % steps;
    if (cache) return us[static_cast<std::size_t>(kk)];
    return family(h * kk);
  };

  double imag_sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    Matrix du = (at(k + 1) - at(k - 1)) / (2.0 * h);
    Complex tr = (at(k).adjoint() * du).trace();
    imag_sum += tr.imag() * h;
  }
  return imag_sum / kTwoPi;
}

long long winding_number(const UnitaryFamily& family, int dim, int steps) {
  double raw = winding_number_raw(family, dim, steps);
  double rounded = std::round(raw);
  if (std::fabs(raw - rounded) > 0.1) throw QuadratureNotConvergedError(raw);
  return static_cast<long long>(rounded);
}

WideInt winding_number_analytic(const CircuitParams& params) {
  return slope(params);
}

namespace {

double gap_at(const UnitaryFamily& family, double lambda) {
  return eig_unitary(family(lambda), 1e-9).min_circular_gap();
}

}  // namespace

std::vector<DegeneracyWindow> degeneracy_scan(const UnitaryFamily& family, int dim,
                                              int grid_steps, double threshold) {
  if (grid_steps < 8) throw Error("degeneracy scan needs at least 8 grid steps");
  (void)dim;
  const double h = kTwoPi / grid_steps;
  std::vector<double> gap(static_cast<std::size_t>(grid_steps) + 1);
  for (int k = 0; k <= grid_steps; ++k) gap[static_cast<std::size_t>(k)] = gap_at(family, h * k);

  // Maximal grid runs already below threshold.
  std::vector<DegeneracyWindow> windows;
  int k = 0;
  while (k <= grid_steps) {
    if (gap[static_cast<std::size_t>(k)] >= threshold) {
      ++k;
      continue;
    }
    int start = k;
    double lowest = gap[static_cast<std::size_t>(k)];
    while (k + 1 <= grid_steps && gap[static_cast<std::size_t>(k + 1)] < threshold) {
      ++k;
      lowest = std::min(lowest, gap[static_cast<std::size_t>(k)]);
    }
    windows.push_back(DegeneracyWindow{h * start, h * k, lowest});
    ++k;
  }

  // Strict local minima above threshold may hide a crossing between grid
  // points; shrink onto each by ternary search.
  for (int j = 1; j < grid_steps; ++j) {
    double g = gap[static_cast<std::size_t>(j)];
    if (g < threshold) continue;
    if (g >= gap[static_cast<std::size_t>(j - 1)] || g >= gap[static_cast<std::size_t>(j + 1)]) continue;
    double lo = h * (j - 1), hi = h * (j + 1);
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-13; ++iter) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (gap_at(family, m1) < gap_at(family, m2))
        hi = m2;
      else
        lo = m1;
    }
    double star = 0.5 * (lo + hi);
    double g_star = gap_at(family, star);
    if (g_star >= threshold) continue;
    // Bisect each side for the threshold boundary.
    double left_lo = h * (j - 1), left_hi = star;
    for (int iter = 0; iter < 80; ++iter) {
      double mid = 0.5 * (left_lo + left_hi);
      (gap_at(family, mid) < threshold ? left_hi : left_lo) = mid;
    }
    double right_lo = star, right_hi = h * (j + 1);
    for (int iter = 0; iter < 80; ++iter) {
      double mid = 0.5 * (right_lo + right_hi);
      (gap_at(family, mid) < threshold ? right_lo : right_hi) = mid;
    }
    windows.push_back(DegeneracyWindow{left_hi, right_lo, g_star});
  }

  std::sort(windows.begin(), windows.end(),
            [](const DegeneracyWindow& a, const DegeneracyWindow& b) { return a.lo < b.lo; });
  std::vector<DegeneracyWindow> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.lo <= merged.back().hi + 1e-12) {
      merged.back().hi = std::max(merged.back().hi, w.hi);
      merged.back().min_gap = std::min(merged.back().min_gap, w.min_gap);
    } else {
      merged.push_back(w);
    }
  }
  return merged;
}

HolonomyReport make_report(const CircuitParams& params, int steps, int max_qubits) {
  params.validate();
  AnholonomyData data = permutation_matrix(params);
  HolonomyReport report;
  report.params = params;
  report.d = slope(params);
  report.cycles = cycle_decompose(data.shift_m);
  report.nu = report.d;
  report.degenerate = params.degenerate_spectrum();
  if (report.degenerate) return report;

  const int dim = 1 << params.qubits();
  if (params.all_odd()) {
    report.sigma.reserve(static_cast<std::size_t>(dim));
    for (int m = 0; m < dim; ++m)
      report.sigma.push_back(Complex(
          sigma_sign(params, labels_from_residue(params, static_cast<std::uint64_t>(m))), 0));
    for (const auto& cycle : report.cycles) {
      int product = 1;
      for (int m : cycle) product *= report.sigma[static_cast<std::size_t>(m)].real() < 0 ? -1 : 1;
      report.gamma.push_back(product < 0 ? kPi : 0.0);
    }
    return report;
  }

  // Even p_1 with an otherwise odd tail: the ladder is nondegenerate but
  // the sign sums do not apply, so measure sigma on the transported frame.
  Matrix frame0 = analytic_frame(params, 0.0);
  UnitaryFamily family = [&params, max_qubits](double lambda) {
    return build_UN(lambda, params, QubitBasis::standard(), max_qubits);
  };
  NumericHolonomy numeric = holonomy_numeric(family, dim, steps, &frame0);
  if (!(numeric.matrix.permutation() == data.shift_m))
    throw Error("numeric permutation disagrees with the ladder shift");
  Vector sig = numeric.matrix.sigma();
  report.sigma.assign(sig.data(), sig.data() + sig.size());
  report.gamma = cycle_phases(numeric.matrix);
  return report;
}

}  // namespace anholonomy
