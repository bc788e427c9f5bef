#pragma once

#include "biot_mortar/common.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <vector>

namespace biot_mortar {

/// Sparse matrix assembled from (row, col, value) contributions; duplicates are summed by
/// finalize(). Only a finalized matrix can be multiplied or factorized.
class SparseMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);

  void add(int row, int col, double value);
  void finalize();
  bool finalized() const { return finalized_; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long nonzeros() const { return static_cast<long>(storage_.nonZeros()); }

  Vector operator*(const Vector& x) const;
  double coeff(int row, int col) const;
  DenseMatrix to_dense() const;
  /// Copy of the sub-block [r0, r0+nr) x [c0, c0+nc).
  SparseMatrix block(int r0, int c0, int nr, int nc) const;
  /// Copy where each listed row is replaced by the corresponding identity row.
  SparseMatrix with_identity_rows(const std::vector<int>& rows) const;
  const Storage& storage() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  bool finalized_ = false;
  std::vector<Eigen::Triplet<double, int>> triplets_;
  Storage storage_;
};

/// Sparse LU factorization with partial pivoting and a fill-reducing column ordering.
/// Immutable once built; concurrent solve() calls with distinct right-hand sides are safe.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& a);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  Vector solve(const Vector& b) const;
  int size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

using LinearOperator = std::function<Vector(const Vector&)>;

struct GmresResult {
  Vector solution;
  int iterations = 0;
  std::vector<double> residuals;  // ||r_k||, k = 0..iterations
  bool converged = false;
};

/// Non-restarted, unpreconditioned GMRES with zero initial guess. Arnoldi uses modified
/// Gram-Schmidt plus one extra orthogonalization pass whenever the new direction keeps a
/// component above 1e-8 along the existing basis. Stops when ||r_k|| <= rel_tol ||r_0||,
/// on breakdown, or after max_it iterations (max_it <= 0 means the problem dimension).
GmresResult gmres(const LinearOperator& apply, const Vector& rhs, double rel_tol = 1e-6, int max_it = 0);

}  // namespace biot_mortar
