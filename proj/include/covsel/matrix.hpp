#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covsel {

/// Thrown when a Cholesky pivot falls at or below the scale-relative
/// tolerance (1e-12 times the largest diagonal entry).
struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense symmetric p x p matrix, packed upper triangle. Symmetry is
/// structural: (i,j) and (j,i) share one storage slot.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  explicit SymmetricMatrix(int p, double fill = 0.0)
      : p_(p), data_(static_cast<std::size_t>(p) * (p + 1) / 2, fill) {
    if (p < 1) throw std::invalid_argument("SymmetricMatrix: dimension must be positive");
  }

  static SymmetricMatrix identity(int p) {
    SymmetricMatrix m(p);
    for (int i = 0; i < p; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static SymmetricMatrix diagonal(const std::vector<double>& d) {
    SymmetricMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
    return m;
  }

  /// Builds from full rows; only the upper triangle is read.
  static SymmetricMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    SymmetricMatrix m(static_cast<int>(rows.size()));
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != m.dim())
        throw std::invalid_argument("SymmetricMatrix::from_rows: ragged rows");
      int j = 0;
      for (double v : row) {
        if (j >= i) m.at(i, j) = v;
        ++j;
      }
      ++i;
    }
    return m;
  }

  int dim() const { return p_; }

  double operator()(int i, int j) const { return data_[index(i, j)]; }

  /// Mutable access; the single packed slot serves (i,j) and (j,i).
  double& at(int i, int j) { return data_[index(i, j)]; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double max_abs_offdiag() const {
    double m = 0.0;
    for (int i = 0; i < p_; ++i)
      for (int j = i + 1; j < p_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }

  double mean_abs_offdiag() const {
    if (p_ < 2) return 0.0;
    double s = 0.0;
    for (int i = 0; i < p_; ++i)
      for (int j = i + 1; j < p_; ++j) s += std::abs((*this)(i, j));
    return 2.0 * s / (static_cast<double>(p_) * (p_ - 1));
  }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < p_; ++i) t += (*this)(i, i);
    return t;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * p_ - static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }

  int p_ = 0;
  std::vector<double> data_;
};

/// n x p data matrix, rows are observations.
class DataMatrix {
 public:
  DataMatrix() = default;

  DataMatrix(int n, int p)
      : n_(n), p_(p), data_(static_cast<std::size_t>(n) * p, 0.0) {
    if (n < 1 || p < 1) throw std::invalid_argument("DataMatrix: shape must be positive");
  }

  int rows() const { return n_; }
  int cols() const { return p_; }

  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * p_ + j]; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * p_ + j]; }

  /// The rows with the listed indices, in the listed order.
  DataMatrix take_rows(const std::vector<int>& idx) const {
    DataMatrix out(static_cast<int>(idx.size()), p_);
    for (int r = 0; r < out.rows(); ++r)
      for (int j = 0; j < p_; ++j) out(r, j) = (*this)(idx[static_cast<std::size_t>(r)], j);
    return out;
  }

 private:
  int n_ = 0;
  int p_ = 0;
  std::vector<double> data_;
};

/// MLE covariance (1/n) sum (X_i - Xbar)(X_i - Xbar)'. With center unset
/// the mean is taken as zero. Divisor is n, not n-1.
inline SymmetricMatrix sample_covariance(const DataMatrix& X, bool center) {
  const int n = X.rows(), p = X.cols();
  if (n < 2) throw std::invalid_argument("sample_covariance: need n >= 2");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      if (!std::isfinite(X(i, j)))
        throw std::invalid_argument("sample_covariance: non-finite entry at row " +
                                    std::to_string(i) + ", column " + std::to_string(j));

  std::vector<double> mean(static_cast<std::size_t>(p), 0.0);
  if (center) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) mean[static_cast<std::size_t>(j)] += X(i, j);
    for (double& m : mean) m /= n;
  }

  SymmetricMatrix A(p);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < p; ++a) {
      const double da = X(i, a) - mean[static_cast<std::size_t>(a)];
      for (int b = a; b < p; ++b)
        A.at(a, b) += da * (X(i, b) - mean[static_cast<std::size_t>(b)]);
    }
  for (int a = 0; a < p; ++a)
    for (int b = a; b < p; ++b) A.at(a, b) /= n;
  return A;
}

/// Lower-triangular Cholesky factor, dense row-major storage.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(int p) : p_(p), data_(static_cast<std::size_t>(p) * p, 0.0) {}

  int dim() const { return p_; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * p_ + j]; }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * p_ + j]; }

  /// y = L z for a length-p vector z.
  std::vector<double> apply(const std::vector<double>& z) const {
    std::vector<double> y(static_cast<std::size_t>(p_), 0.0);
    for (int i = 0; i < p_; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += (*this)(i, j) * z[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s;
    }
    return y;
  }

 private:
  int p_ = 0;
  std::vector<double> data_;
};

/// L with L L' = M, positive diagonal. Fails when a pivot drops to or
/// below 1e-12 times the largest diagonal entry of M.
inline CholeskyFactor cholesky(const SymmetricMatrix& M) {
  const int p = M.dim();
  double max_diag = 0.0;
  for (int i = 0; i < p; ++i) max_diag = std::max(max_diag, M(i, i));
  const double tol = 1e-12 * max_diag;

  CholeskyFactor L(p);
  for (int j = 0; j < p; ++j) {
    double pivot = M(j, j);
    for (int k = 0; k < j; ++k) pivot -= L(j, k) * L(j, k);
    if (pivot <= tol)
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(pivot) +
                                " at column " + std::to_string(j));
    const double ljj = std::sqrt(pivot);
    L.at(j, j) = ljj;
    for (int i = j + 1; i < p; ++i) {
      double s = M(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L.at(i, j) = s / ljj;
    }
  }
  return L;
}

/// log|M| = 2 sum log L_ii for positive definite M.
inline double log_det(const SymmetricMatrix& M) {
  const CholeskyFactor L = cholesky(M);
  double s = 0.0;
  for (int i = 0; i < M.dim(); ++i) s += std::log(L(i, i));
  return 2.0 * s;
}

/// M^{-1} via the Cholesky factor: invert L, form L^{-T} L^{-1}.
inline SymmetricMatrix inverse_spd(const SymmetricMatrix& M) {
  const int p = M.dim();
  const CholeskyFactor L = cholesky(M);

  // V = L^{-1}, lower triangular.
  CholeskyFactor V(p);
  for (int j = 0; j < p; ++j) {
    V.at(j, j) = 1.0 / L(j, j);
    for (int i = j + 1; i < p; ++i) {
      double s = 0.0;
      for (int k = j; k < i; ++k) s += L(i, k) * V(k, j);
      V.at(i, j) = -s / L(i, i);
    }
  }

  SymmetricMatrix inv(p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      double s = 0.0;
      for (int k = j; k < p; ++k) s += V(k, i) * V(k, j);
      inv.at(i, j) = s;
    }
  return inv;
}

/// tr(AB) = sum_{ij} A_ij B_ij for symmetric A, B.
inline double trace_product(const SymmetricMatrix& A, const SymmetricMatrix& B) {
  if (A.dim() != B.dim()) throw std::invalid_argument("trace_product: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < A.dim(); ++i) {
    s += A(i, i) * B(i, i);
    for (int j = i + 1; j < A.dim(); ++j) s += 2.0 * A(i, j) * B(i, j);
  }
  return s;
}

}  // namespace covsel
