#include "biot_mortar/linalg.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace biot_mortar {

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), storage_(rows, cols) {}

void SparseMatrix::add(int row, int col, double value) {
  if (finalized_) throw std::logic_error("SparseMatrix::add after finalize");
  if (value != 0.0) triplets_.emplace_back(row, col, value);
}

void SparseMatrix::finalize() {
  storage_.resize(rows_, cols_);
  storage_.setFromTriplets(triplets_.begin(), triplets_.end());
  storage_.makeCompressed();
  triplets_.clear();
  triplets_.shrink_to_fit();
  finalized_ = true;
}

const SparseMatrix::Storage& SparseMatrix::storage() const {
  if (!finalized_) throw std::logic_error("SparseMatrix used before finalize");
  return storage_;
}

Vector SparseMatrix::operator*(const Vector& x) const { return storage() * x; }

double SparseMatrix::coeff(int row, int col) const { return storage().coeff(row, col); }

DenseMatrix SparseMatrix::to_dense() const { return DenseMatrix(storage()); }

SparseMatrix SparseMatrix::block(int r0, int c0, int nr, int nc) const {
  SparseMatrix out(nr, nc);
  const Storage& s = storage();
  for (int c = c0; c < c0 + nc; ++c)
    for (Storage::InnerIterator it(s, c); it; ++it)
      if (it.row() >= r0 && it.row() < r0 + nr) out.add(it.row() - r0, c - c0, it.value());
  out.finalize();
  return out;
}

SparseMatrix SparseMatrix::with_identity_rows(const std::vector<int>& rows) const {
  std::vector<char> replaced(rows_, 0);
  for (int r : rows) replaced[r] = 1;
  SparseMatrix out(rows_, cols_);
  const Storage& s = storage();
  for (int c = 0; c < cols_; ++c)
    for (Storage::InnerIterator it(s, c); it; ++it)
      if (!replaced[it.row()]) out.add(it.row(), c, it.value());
  for (int r = 0; r < rows_; ++r)
    if (replaced[r]) out.add(r, r, 1.0);
  out.finalize();
  return out;
}

struct Factorization::Impl {
  Eigen::SparseLU<SparseMatrix::Storage, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(const SparseMatrix& a) : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) throw InputError("factorization needs a square matrix");
  impl_->lu.analyzePattern(a.storage());
  impl_->lu.factorize(a.storage());
  if (impl_->lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sparse LU failed on a " << a.rows() << "x" << a.cols() << " matrix: " << impl_->lu.lastErrorMessage();
    throw NumericalError(msg.str());
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Vector Factorization::solve(const Vector& b) const {
  Vector x = impl_->lu.solve(b);
  return x;
}

GmresResult gmres(const LinearOperator& apply, const Vector& rhs, double rel_tol, int max_it) {
  const int n = static_cast<int>(rhs.size());
  if (max_it <= 0) max_it = n;
  GmresResult result;
  result.solution = Vector::Zero(n);
  const double beta = rhs.norm();
  result.residuals.push_back(beta);
  if (beta == 0.0) {
    result.converged = true;
    return result;
  }

  std::vector<Vector> basis;
  basis.reserve(std::min(max_it, n) + 1);
  basis.push_back(rhs / beta);
  std::vector<Vector> hess;  // column k has k+2 entries
  std::vector<double> cs, sn;
  std::vector<double> g = {beta};

  for (int k = 0; k < max_it; ++k) {
    Vector w = apply(basis[k]);
    const double w_norm0 = w.norm();
    Vector h = Vector::Zero(k + 2);
    for (int j = 0; j <= k; ++j) {
      h(j) = basis[j].dot(w);
      w -= h(j) * basis[j];
    }
    double w_norm = w.norm();
    if (w_norm > 0.0) {
      Vector c(k + 1);
      for (int j = 0; j <= k; ++j) c(j) = basis[j].dot(w);
      if (c.cwiseAbs().maxCoeff() > 1e-8 * w_norm) {
        for (int j = 0; j <= k; ++j) w -= c(j) * basis[j];
        h.head(k + 1) += c;
        w_norm = w.norm();
      }
    }
    h(k + 1) = w_norm;

    for (int j = 0; j < k; ++j) {
      const double a = cs[j] * h(j) + sn[j] * h(j + 1);
      h(j + 1) = -sn[j] * h(j) + cs[j] * h(j + 1);
      h(j) = a;
    }
    const double denom = std::hypot(h(k), h(k + 1));
    const double c = denom == 0.0 ? 1.0 : h(k) / denom;
    const double s = denom == 0.0 ? 0.0 : h(k + 1) / denom;
    cs.push_back(c);
    sn.push_back(s);
    h(k) = c * h(k) + s * h(k + 1);
    h(k + 1) = 0.0;
    g.push_back(-s * g[k]);
    g[k] = c * g[k];
    hess.push_back(h);

    const double res = std::abs(g[k + 1]);
    result.residuals.push_back(res);
    result.iterations = k + 1;
    const bool breakdown = w_norm <= 1e-14 * std::max(w_norm0, 1e-300);
    if (res <= rel_tol * beta || breakdown) {
      result.converged = true;
      break;
    }
    if (k + 1 < max_it) basis.push_back(w / w_norm);
  }

  const int m = result.iterations;
  Vector y(m);
  for (int i = m - 1; i >= 0; --i) {
    double acc = g[i];
    for (int j = i + 1; j < m; ++j) acc -= hess[j](i) * y(j);
    y(i) = acc / hess[i](i);
  }
  for (int j = 0; j < m; ++j) result.solution += y(j) * basis[j];
  return result;
}

}  // namespace biot_mortar
