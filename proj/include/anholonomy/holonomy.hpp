#pragma once

#include <functional>
#include <string>
#include <vector>

#include "anholonomy/circuits.hpp"
#include "anholonomy/core.hpp"
#include "anholonomy/spectral.hpp"

namespace anholonomy {

struct OddParamsRequiredError : Error {
  using Error::Error;
};

struct DegeneracyOnPathError : Error {
  double lambda_lo = 0, lambda_hi = 0, gap = 0;
  DegeneracyOnPathError(double lo, double hi, double g)
      : Error("eigenangle gap " + std::to_string(g) + " inside lambda window [" +
              std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        lambda_lo(lo), lambda_hi(hi), gap(g) {}
  explicit DegeneracyOnPathError(const std::string& what) : Error(what) {}
};

struct UnderResolvedError : Error {
  double worst_overlap;
  explicit UnderResolvedError(double worst)
      : Error("frame matching collapsed (worst overlap " + std::to_string(worst) + ")"),
        worst_overlap(worst) {}
};

struct NotPeriodicError : Error {
  using Error::Error;
};

struct NotClosedError : Error {
  using Error::Error;
};

struct QuadratureNotConvergedError : Error {
  double value;
  explicit QuadratureNotConvergedError(double v)
      : Error("winding quadrature " + std::to_string(v) + " is not near an integer"), value(v) {}
};

// Cycle holonomy matrix M with {M}_{n',n} = <n'(0)|n(2 pi)>, the final
// vector carried by parallel transport.  For a nondegenerate cycle it is
// a permutation matrix times unimodular phases.
struct HolonomyMatrix {
  Matrix m;
  std::string gauge_tag;

  // Unitary within tol; exactly one unimodular entry per row and column.
  void validate(double tol = 1e-8) const;
  Permutation permutation(double tol = 1e-8) const;
  // sigma[k] = m(perm(k), k), the phase carried from rung k to its successor.
  Vector sigma(double tol = 1e-8) const;
};

using UnitaryFamily = std::function<Matrix(double)>;

struct SweepOptions {
  double unitary_tol = 1e-10;
  double degeneracy_tol = 1e-6;
  double overlap_threshold = 0.70710678118654752;  // 1/sqrt(2)
  int max_refinements = 4;  // each refinement doubles the step count
  bool keep_frames = false;
};

// Diagnostics of one transport sweep.
struct SweepTrace {
  std::vector<double> lambdas;
  std::vector<Eigen::VectorXd> path_angles;  // eigenphase of each tracked path, per step
  std::vector<Permutation> matchings;        // tracked path -> eigenframe column, per step
  Eigen::VectorXd transport_phases;          // accumulated rephasing applied per path
  std::vector<Matrix> frames;                // transported frames (only with keep_frames)
  double worst_overlap = 1.0;
  int steps_used = 0;
};

struct NumericHolonomy {
  HolonomyMatrix matrix;
  SweepTrace trace;
};

// One-qubit cycle holonomy in closed form; entries are exact 0 / +-1.
HolonomyMatrix holonomy_single(long long p);

// sigma(n) = (-1)^{sum_k r^{(k)}(n)} for all-odd parameters.
// Throws OddParamsRequiredError otherwise (an even p_j breaks the sign rule).
int sigma_sign(const CircuitParams& params, const QuantumNumbers& n);

// Analytic M in the ladder-residue basis, assembled along two independent
// routes (residue shift + sign sums vs. the level-by-level recursion) that
// must agree entrywise exactly.  All-odd parameters only.
HolonomyMatrix holonomy_analytic(const CircuitParams& params);

// Eigenvectors of the hierarchical circuit at `lambda`, column-ordered by
// ladder residue.  This is the transport-gauge frame the analytic M refers
// to; hand it to holonomy_numeric for an entrywise-comparable result.
Matrix analytic_frame(const CircuitParams& params, double lambda);

// Discrete parallel transport around the cycle: diagonalize on a grid,
// match frames by largest overlap, rephase each step's overlap to be real
// positive, and take overlaps with the starting frame.  Starts from
// `initial_frame` when given (columns must be eigenvectors of family(0)),
// otherwise from the angle-sorted eigenframe.  A matching overlap below
// the threshold triggers refinement (step doubling) before giving up with
// UnderResolvedError.
NumericHolonomy holonomy_numeric(const UnitaryFamily& family, int dim, int steps,
                                 const Matrix* initial_frame = nullptr,
                                 const SweepOptions& options = {});

// M -> G^dag M G with G = diag(e^{i phases}).
HolonomyMatrix gauge_transform(const HolonomyMatrix& m, const std::vector<double>& phases);

// Gauge-invariant cycle phases: per cycle of the permutation pattern,
// gamma = arg prod sigma, wrapped to [0, 2 pi).  Order follows
// cycle_decompose of the pattern.
std::vector<double> cycle_phases(const HolonomyMatrix& m, double tol = 1e-8);

// Diagonal gauge U_d with {U_d}_{c0} = 1 on each cycle's smallest element
// and the ladder {U_d}_{succ} = {U_d}_{cur} sigma_{cur} e^{-i gamma / L}
// along the cycle; U_d^dag M U_d then carries the constant phase
// e^{i gamma / L} on every step of each length-L cycle.
struct CanonicalGauge {
  Vector u_diag;
  Matrix canonical;
  std::vector<double> gamma;
};
CanonicalGauge canonical_gauge(const HolonomyMatrix& m, double tol = 1e-8);

// Cycle phases of the parameter family itself.  All-odd parameters give
// the exact integer route; an even p_1 (spectrum still nondegenerate)
// falls back to the numeric sweep.  Degenerate spectra are refused.
std::vector<double> gamma_of_params(const CircuitParams& params, int steps = 2048,
                                    int max_qubits = 8);

// Berry phase of one eigenpath followed through `cycles` consecutive
// parameter cycles (the loop closes after a full permutation cycle).
// Discrete overlap-product formula; gauge invariant on the closed loop.
// Throws NotClosedError when the path does not return to the starting
// eigenspace.
double berry_phase_extended_cycle(const UnitaryFamily& family, int dim, int steps_per_cycle,
                                  int cycles, int start_index,
                                  const Matrix* initial_frame = nullptr,
                                  const SweepOptions& options = {});

// (1 / 2 pi i) \oint tr[U^{-1} dU/dlambda] dlambda by periodic trapezoid
// quadrature with central differences.
double winding_number_raw(const UnitaryFamily& family, int dim, int steps);

// winding_number_raw rounded to the nearest integer; throws
// QuadratureNotConvergedError when the raw value strays further than 0.1.
long long winding_number(const UnitaryFamily& family, int dim, int steps);

// The exact value for the hierarchical family: d_N (also the sum of the
// winding integers r over all labels).
WideInt winding_number_analytic(const CircuitParams& params);

// Lambda windows where the circular eigenangle gap drops below the
// threshold.  Grid scan plus local refinement of strict minima, so
// isolated crossings between grid points are still found.
struct DegeneracyWindow {
  double lo, hi, min_gap;
};
std::vector<DegeneracyWindow> degeneracy_scan(const UnitaryFamily& family, int dim,
                                              int grid_steps, double threshold = 1e-6);

// Everything the CLI reports for one parameter set: permutation cycles on
// ladder residues, per-rung sigma, per-cycle gamma, winding number, and
// the degeneracy flag.  sigma and gamma stay empty for degenerate spectra.
struct HolonomyReport {
  CircuitParams params;
  WideInt d;
  std::vector<std::vector<int>> cycles;
  std::vector<Complex> sigma;
  std::vector<double> gamma;
  WideInt nu;
  bool degenerate = false;
};
HolonomyReport make_report(const CircuitParams& params, int steps = 2048, int max_qubits = 8);

}  // namespace anholonomy
