#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "covsel/matrix.hpp"

namespace covsel {

struct GlassoOptions {
  double outer_tol = 1e-4;
  double inner_tol = 1e-6;
  int max_outer_sweeps = 100;
  int max_inner_sweeps = 1000;
  double zero_threshold = 1e-8;

  void validate() const {
    if (outer_tol <= 0 || inner_tol <= 0 || zero_threshold <= 0)
      throw std::invalid_argument("GlassoOptions: tolerances must be positive");
    if (max_outer_sweeps < 1 || max_inner_sweeps < 1)
      throw std::invalid_argument("GlassoOptions: sweep limits must be at least 1");
  }
};

struct GlassoSolution {
  SymmetricMatrix C_hat;   // precision estimate, exact zeros off the support
  SymmetricMatrix W_hat;   // covariance estimate, C_hat^{-1} up to tolerance
  std::vector<std::pair<int, int>> edges;  // (i,j), i<j, c_ij != 0
  double objective = 0.0;  // weighted objective at C_hat
  int outer_sweeps = 0;
  bool converged = false;
  int lla_iterations = 0;  // reweighted solves after the initial fit (SCAD only)
};

/// -log|C| + tr(C A) + sum_{i != j} w_ij |c_ij|.
inline double objective(const SymmetricMatrix& C, const SymmetricMatrix& A,
                        const SymmetricMatrix& weights) {
  if (C.dim() != A.dim() || C.dim() != weights.dim())
    throw std::invalid_argument("objective: dimension mismatch");
  double pen = 0.0;
  for (int i = 0; i < C.dim(); ++i)
    for (int j = i + 1; j < C.dim(); ++j) pen += 2.0 * weights(i, j) * std::abs(C(i, j));
  return -log_det(C) + trace_product(C, A) + pen;
}

namespace detail {

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

inline void validate_glasso_inputs(const SymmetricMatrix& A, const SymmetricMatrix& weights) {
  const int p = A.dim();
  if (weights.dim() != p)
    throw std::invalid_argument("solve_weighted_glasso: weight dimension mismatch");
  if (!A.all_finite()) throw std::invalid_argument("solve_weighted_glasso: non-finite entries in A");
  for (int i = 0; i < p; ++i) {
    if (!(A(i, i) > 0))
      throw std::invalid_argument("solve_weighted_glasso: diagonal of A must be strictly positive");
    if (weights(i, i) != 0)
      throw std::invalid_argument("solve_weighted_glasso: weight diagonal must be zero");
    for (int j = i + 1; j < p; ++j)
      if (!(weights(i, j) >= 0) || !std::isfinite(weights(i, j)))
        throw std::invalid_argument("solve_weighted_glasso: weights must be nonnegative and finite");
  }
}

}  // namespace detail

/// Weighted-L1 graphical lasso by block coordinate descent.
///
/// The covariance iterate W keeps its diagonal fixed at diag(A) (the
/// diagonal is unpenalized). Each sweep visits columns j in turn, solving
///   min_beta  1/2 beta' W11 beta - s12' beta + sum_i w_ij |beta_i|
/// by cyclic coordinate descent with soft thresholding, where W11 drops
/// row/column j and s12 is column j of A off the diagonal; the off-diagonal
/// of W column j becomes W11 beta. Sweeps stop when the mean absolute
/// change of the W off-diagonals falls to outer_tol times the mean
/// absolute off-diagonal of A.
///
/// The precision estimate is recovered per column from the final iterate,
///   c_jj = 1/(W_jj - W12' beta_j),   c_12 = -beta_j c_jj,
/// and symmetrized: the edge set is the union of the two directed zero
/// patterns, values are averaged, and anything at or below zero_threshold
/// is snapped to an exact zero.
///
/// `warm`, when given, seeds W and the per-column beta from a previous
/// solution on the same A (path following over a lambda grid).
inline GlassoSolution solve_weighted_glasso(const SymmetricMatrix& A,
                                            const SymmetricMatrix& weights,
                                            const GlassoOptions& opts = {},
                                            const GlassoSolution* warm = nullptr) {
  opts.validate();
  detail::validate_glasso_inputs(A, weights);
  const int p = A.dim();
  const std::size_t np = static_cast<std::size_t>(p);

  // lambda = 0 everywhere demands a positive definite A (solution is A^{-1}).
  if (weights.max_abs_offdiag() == 0.0 && p > 1) cholesky(A);

  const double a_scale = A.mean_abs_offdiag();
  const double outer_thresh = opts.outer_tol * a_scale;
  const double inner_thresh = a_scale > 0 ? opts.inner_tol * a_scale : opts.inner_tol;

  // Dense row-major working copies.
  std::vector<double> a(np * np), wgt(np * np), W(np * np);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      a[np * i + j] = A(i, j);
      wgt[np * i + j] = weights(i, j);
    }

  // B(:, j) holds the subproblem solution for column j, with B(j, j) unused.
  std::vector<double> B(np * np, 0.0);

  W = a;
  if (warm) {
    if (warm->W_hat.dim() != p || warm->C_hat.dim() != p)
      throw std::invalid_argument("solve_weighted_glasso: warm start dimension mismatch");
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        if (i != j) W[np * i + j] = warm->W_hat(i, j);
        if (i != j) B[np * j + i] = -warm->C_hat(i, j) / warm->C_hat(j, j);
      }
  }
  for (int i = 0; i < p; ++i) W[np * i + i] = a[np * i + i];

  bool converged = (p == 1) || a_scale == 0.0;
  int sweeps = 0;
  std::vector<double> W_prev(np * np), r(np);

  while (!converged && sweeps < opts.max_outer_sweeps) {
    W_prev = W;
    for (int j = 0; j < p; ++j) {
      double* beta = &B[np * j];
      // r_i = sum_{k != j} W_ik beta_k, maintained across updates.
      for (int i = 0; i < p; ++i) {
        double s = 0.0;
        for (int k = 0; k < p; ++k)
          if (k != j && beta[k] != 0.0) s += W[np * i + k] * beta[k];
        r[static_cast<std::size_t>(i)] = s;
      }

      for (int cycle = 0; cycle < opts.max_inner_sweeps; ++cycle) {
        double max_delta = 0.0;
        for (int i = 0; i < p; ++i) {
          if (i == j) continue;
          const double wii = W[np * i + i];
          const double z = a[np * i + j] - r[static_cast<std::size_t>(i)] + wii * beta[i];
          const double updated = detail::soft_threshold(z, wgt[np * i + j]) / wii;
          const double delta = updated - beta[i];
          if (delta != 0.0) {
            beta[i] = updated;
            for (int k = 0; k < p; ++k)
              if (k != j) r[static_cast<std::size_t>(k)] += W[np * k + i] * delta;
            max_delta = std::max(max_delta, std::abs(delta));
          }
        }
        if (max_delta <= inner_thresh) break;
      }

      // New W column j off-diagonal is W11 beta, which is r off row j.
      for (int i = 0; i < p; ++i) {
        if (i == j) continue;
        W[np * i + j] = r[static_cast<std::size_t>(i)];
        W[np * j + i] = r[static_cast<std::size_t>(i)];
      }
    }
    ++sweeps;

    double change = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (i != j) change += std::abs(W[np * i + j] - W_prev[np * i + j]);
    change /= static_cast<double>(p) * (p - 1);
    if (change <= outer_thresh) converged = true;
  }

  // Per-column recovery from the final iterate.
  std::vector<double> c_dir(np * np, 0.0), c_diag(np);
  for (int j = 0; j < p; ++j) {
    const double* beta = &B[np * j];
    double dot = 0.0;
    for (int i = 0; i < p; ++i)
      if (i != j) dot += W[np * i + j] * beta[i];
    const double denom = W[np * j + j] - dot;
    if (!(denom > 0))
      throw NotPositiveDefinite("solve_weighted_glasso: nonpositive partial variance at column " +
                                std::to_string(j));
    c_diag[static_cast<std::size_t>(j)] = 1.0 / denom;
    for (int i = 0; i < p; ++i)
      if (i != j) c_dir[np * i + j] = -beta[i] * c_diag[static_cast<std::size_t>(j)];
  }

  GlassoSolution sol;
  sol.C_hat = SymmetricMatrix(p);
  for (int j = 0; j < p; ++j) sol.C_hat.at(j, j) = c_diag[static_cast<std::size_t>(j)];
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const bool nz = c_dir[np * i + j] != 0.0 || c_dir[np * j + i] != 0.0;
      double v = nz ? 0.5 * (c_dir[np * i + j] + c_dir[np * j + i]) : 0.0;
      if (std::abs(v) <= opts.zero_threshold) v = 0.0;
      sol.C_hat.at(i, j) = v;
      if (v != 0.0) sol.edges.emplace_back(i, j);
    }

  sol.W_hat = inverse_spd(sol.C_hat);  // also certifies positive definiteness
  sol.objective = objective(sol.C_hat, A, weights);
  sol.outer_sweeps = sweeps;
  sol.converged = converged;
  return sol;
}

/// Stationarity certificate: with G = A - C_hat^{-1}, the worst violation of
///   G_ij + w_ij sign(c_ij) = 0      on the support,
///   |G_ij| <= w_ij                  off the support,
///   G_ii = 0                        on the (unpenalized) diagonal.
inline double kkt_residual(const GlassoSolution& sol, const SymmetricMatrix& A,
                           const SymmetricMatrix& weights) {
  const int p = A.dim();
  const SymmetricMatrix G = inverse_spd(sol.C_hat);
  double worst = 0.0;
  for (int i = 0; i < p; ++i) {
    worst = std::max(worst, std::abs(A(i, i) - G(i, i)));
    for (int j = i + 1; j < p; ++j) {
      const double g = A(i, j) - G(i, j);
      const double c = sol.C_hat(i, j);
      if (c != 0.0)
        worst = std::max(worst, std::abs(g + weights(i, j) * (c > 0 ? 1.0 : -1.0)));
      else
        worst = std::max(worst, std::max(0.0, std::abs(g) - weights(i, j)));
    }
  }
  return worst;
}

}  // namespace covsel
