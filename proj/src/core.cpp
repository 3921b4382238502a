#include "anholonomy/core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace anholonomy {

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  Matrix defect = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return max_abs(defect) <= tol;
}

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // fmod can land exactly on 2*pi after the add
  return w;
}

double circular_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

double EigenFrame::min_circular_gap() const {
  const int n = dim();
  if (n < 2) return kTwoPi;
  // Angles are sorted ascending, so only adjacent pairs plus the wrap
  // can realize the minimum.
  double best = kTwoPi - (angles[n - 1] - angles[0]);
  for (int k = 0; k + 1 < n; ++k) best = std::min(best, angles[k + 1] - angles[k]);
  return best;
}

EigenFrame eig_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) throw NotUnitaryError(1.0);
  {
    Matrix defect = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    double dev = max_abs(defect);
    if (dev > tol) throw NotUnitaryError(dev);
  }

  const int n = static_cast<int>(u.rows());
  Eigen::ComplexSchur<Matrix> schur(u, /*computeU=*/true);
  if (schur.info() != Eigen::Success) throw NoConvergenceError("Schur reduction did not converge");

  // For a unitary input T is diagonal up to backward error; fold the
  // remaining strict upper part into the residual bound below.
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> angle(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) angle[static_cast<std::size_t>(k)] = wrap_angle(std::arg(t(k, k)));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return angle[static_cast<std::size_t>(a)] < angle[static_cast<std::size_t>(b)];
  });

  EigenFrame frame;
  frame.tol = tol;
  frame.angles.resize(n);
  frame.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    frame.angles[k] = angle[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    frame.vectors.col(k) = q.col(order[static_cast<std::size_t>(k)]);
  }

  const double residual_bound = std::max(tol, 1e-12 * n);
  for (int k = 0; k < n; ++k) {
    Vector v = frame.vectors.col(k);
    Complex ev = std::polar(1.0, frame.angles[k]);
    double res = (u * v - ev * v).cwiseAbs().maxCoeff();
    if (res > residual_bound)
      throw NoConvergenceError("eigenpair residual " + std::to_string(res) + " exceeds bound");
  }
  return frame;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  const int n = static_cast<int>(image_.size());
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : image_) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw Error("permutation image is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> im(static_cast<std::size_t>(n));
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

std::vector<std::vector<int>> cycle_decompose(const Permutation& perm) {
  const int n = perm.size();
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> cycles;
  for (int start = 0; start < n; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cycle;
    int k = start;
    do {
      visited[static_cast<std::size_t>(k)] = 1;
      cycle.push_back(k);
      k = perm(k);
    } while (k != start);
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Rephase so the distribution does not depend on the QR sign convention.
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    q.col(j) *= (std::abs(d) == 0.0) ? Complex(1, 0) : d / std::abs(d);
  }
  return q;
}

}  // namespace anholonomy
