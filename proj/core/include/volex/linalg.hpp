#pragma once

#include <span>
#include <vector>

namespace volex {

/// Dense row-major n x n matrix. Dimensions here are tiny (charts are
/// typically 2- to 4-dimensional), so everything is plain loops.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  static Matrix identity(int n);

  double max_abs() const;
  bool all_finite() const;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix matmul(const Matrix& a, const Matrix& b);

/// Determinant by LU with partial pivoting.
double determinant(const Matrix& m);

/// Inverse by Gauss-Jordan with partial pivoting; det_out (optional)
/// receives the determinant. Throws SingularMetric when |det| < 1e-14.
Matrix inverse(const Matrix& m, double* det_out = nullptr);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

/// Deterministic pairwise (tree) summation; result is independent of any
/// outer parallel decomposition as long as the term order is fixed.
double pairwise_sum(std::span<const double> terms);

}  // namespace volex
