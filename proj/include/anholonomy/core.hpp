#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace anholonomy {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotUnitaryError : Error {
  double deviation;
  explicit NotUnitaryError(double dev)
      : Error("matrix is not unitary (max |U^dag U - 1| = " + std::to_string(dev) + ")"),
        deviation(dev) {}
};

struct NoConvergenceError : Error {
  using Error::Error;
};

// Largest entry magnitude; the max-norm used for all matrix comparisons here.
double max_abs(const Matrix& a);

bool is_unitary(const Matrix& u, double tol = 1e-10);

// Reduce an angle to [0, 2*pi).
double wrap_angle(double theta);

// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

// Spectral data of a unitary: eigenphases theta_k in [0, 2*pi), ascending,
// and an orthonormal eigenvector per phase (column k of `vectors`).
struct EigenFrame {
  Eigen::VectorXd angles;
  Matrix vectors;
  double tol = 1e-10;

  int dim() const { return static_cast<int>(angles.size()); }
  double min_circular_gap() const;
  bool degenerate(double threshold = 1e-8) const { return min_circular_gap() < threshold; }
};

// Eigendecomposition of a unitary matrix via its Schur form (the Schur
// vectors of a normal matrix are orthonormal eigenvectors, which a general
// eigensolver does not guarantee inside near-degenerate clusters).
// Throws NotUnitaryError when max |U^dag U - 1| > tol, NoConvergenceError
// when the reduction fails or a residual ||U v - e^{i theta} v|| exceeds
// a backward-stability bound.
EigenFrame eig_unitary(const Matrix& u, double tol = 1e-10);

// A permutation of {0, ..., n-1}; image[k] is the successor of k.
class Permutation {
 public:
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int k) const { return image_.at(static_cast<std::size_t>(k)); }
  const std::vector<int>& image() const { return image_; }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.image_ == b.image_;
  }

 private:
  std::vector<int> image_;
};

// Disjoint cycles of a permutation.  Each cycle starts at its smallest
// element; the list is ordered by those starting elements.  Fixed points
// appear as length-1 cycles.
std::vector<std::vector<int>> cycle_decompose(const Permutation& perm);

// Haar-ish random unitary from a seeded generator (QR of a complex
// Gaussian matrix with the R diagonal rephased); deterministic per seed.
Matrix random_unitary(int dim, std::uint64_t seed);

}  // namespace anholonomy
