#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "covsel/glasso.hpp"
#include "covsel/matrix.hpp"
#include "covsel/penalty.hpp"

namespace covsel {

struct FitOptions {
  GlassoOptions glasso;
  int max_lla_iterations = 10;
  double lla_tol = 1e-4;
  double ridge_epsilon_scale = 1e-3;

  void validate() const {
    glasso.validate();
    if (max_lla_iterations < 1)
      throw std::invalid_argument("FitOptions: max_lla_iterations must be at least 1");
    if (lla_tol <= 0) throw std::invalid_argument("FitOptions: lla_tol must be positive");
    if (ridge_epsilon_scale <= 0)
      throw std::invalid_argument("FitOptions: ridge_epsilon_scale must be positive");
  }
};

namespace detail {

inline SymmetricMatrix constant_offdiag_weights(int p, double lambda) {
  SymmetricMatrix w(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) w.at(i, j) = lambda;
  return w;
}

inline double mean_abs_offdiag_diff(const SymmetricMatrix& x, const SymmetricMatrix& y) {
  const int p = x.dim();
  if (p < 2) return 0.0;
  double s = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) s += std::abs(x(i, j) - y(i, j));
  return 2.0 * s / (static_cast<double>(p) * (p - 1));
}

}  // namespace detail

/// L1-penalized precision estimate: every off-diagonal carries weight lambda.
inline GlassoSolution fit_lasso(const SymmetricMatrix& A, double lambda,
                                const FitOptions& opts = {},
                                const GlassoSolution* warm = nullptr) {
  opts.validate();
  if (lambda < 0) throw std::invalid_argument("fit_lasso: lambda must be nonnegative");
  return solve_weighted_glasso(A, detail::constant_offdiag_weights(A.dim(), lambda),
                               opts.glasso, warm);
}

/// SCAD-penalized estimate by iterative local linear approximation: start
/// from the L1 fit at the same lambda, then repeatedly re-solve with each
/// weight set to the SCAD derivative at the current estimate's magnitude.
/// Stops when the edge set is unchanged and the mean absolute off-diagonal
/// change drops to lla_tol times the mean absolute off-diagonal of A;
/// hitting max_lla_iterations first clears the converged flag.
inline GlassoSolution fit_scad(const SymmetricMatrix& A, double lambda,
                               double a = kDefaultScadA, const FitOptions& opts = {},
                               const GlassoSolution* warm = nullptr) {
  opts.validate();
  if (lambda < 0) throw std::invalid_argument("fit_scad: lambda must be nonnegative");
  if (a <= 2) throw std::invalid_argument("fit_scad: a must exceed 2");
  GlassoSolution current = fit_lasso(A, lambda, opts, warm);
  if (lambda == 0.0) return current;  // every reweighting step would use zero weights

  const PenaltySpec spec = PenaltySpec::scad(lambda, a);
  const double change_thresh = opts.lla_tol * A.mean_abs_offdiag();
  bool lla_converged = false;
  int iterations = 0;
  while (iterations < opts.max_lla_iterations) {
    const SymmetricMatrix w = lla_weight_matrix(spec, current.C_hat);
    GlassoSolution next = solve_weighted_glasso(A, w, opts.glasso, &current);
    ++iterations;
    const bool same_edges = next.edges == current.edges;
    const double change = detail::mean_abs_offdiag_diff(next.C_hat, current.C_hat);
    current = std::move(next);
    if (same_edges && change <= change_thresh) {
      lla_converged = true;
      break;
    }
  }
  current.lla_iterations = iterations;
  current.converged = current.converged && lla_converged;
  return current;
}

/// Pilot precision estimate behind the adaptive weights: A^{-1} when A is
/// positive definite, otherwise (A + eps I)^{-1} with
/// eps = ridge_epsilon_scale * tr(A) / p.
inline SymmetricMatrix initial_estimate(const SymmetricMatrix& A, int n,
                                        const FitOptions& opts = {}) {
  (void)n;  // the rule depends only on whether A itself is invertible
  opts.validate();
  try {
    return inverse_spd(A);
  } catch (const NotPositiveDefinite&) {
    const double eps = opts.ridge_epsilon_scale * A.trace() / A.dim();
    SymmetricMatrix ridged = A;
    for (int i = 0; i < A.dim(); ++i) ridged.at(i, i) += eps;
    return inverse_spd(ridged);
  }
}

/// Adaptive-L1 estimate: one weighted solve with weights
/// lambda * min(|c~_ij|^{-gamma}, cap) taken from the pilot precision
/// estimate C_tilde (see initial_estimate).
inline GlassoSolution fit_adaptive(const SymmetricMatrix& A, double lambda, double gamma,
                                   const SymmetricMatrix& C_tilde,
                                   const FitOptions& opts = {},
                                   const GlassoSolution* warm = nullptr) {
  opts.validate();
  if (lambda < 0) throw std::invalid_argument("fit_adaptive: lambda must be nonnegative");
  if (C_tilde.dim() != A.dim())
    throw std::invalid_argument("fit_adaptive: C_tilde dimension mismatch");
  const SymmetricMatrix base = adaptive_weights(C_tilde, gamma, kDefaultWeightCap);
  SymmetricMatrix w(A.dim());
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i + 1; j < A.dim(); ++j) w.at(i, j) = lambda * base(i, j);
  return solve_weighted_glasso(A, w, opts.glasso, warm);
}

/// Which penalty a tuning or experiment driver should fit, with its
/// shape parameters.
struct PenaltyConfig {
  PenaltyKind kind = PenaltyKind::Lasso;
  double scad_a = kDefaultScadA;
  double adaptive_gamma = kDefaultAdaptiveGamma;
};

/// Uniform entry point over the three penalties at one lambda. For the
/// adaptive penalty, pass `pilot` to reuse one initial_estimate across a
/// lambda grid; otherwise it is computed here from A.
inline GlassoSolution fit_penalized(const SymmetricMatrix& A, int n, double lambda,
                                    const PenaltyConfig& cfg, const FitOptions& opts = {},
                                    const GlassoSolution* warm = nullptr,
                                    const SymmetricMatrix* pilot = nullptr) {
  switch (cfg.kind) {
    case PenaltyKind::Lasso:
      return fit_lasso(A, lambda, opts, warm);
    case PenaltyKind::Scad:
      return fit_scad(A, lambda, cfg.scad_a, opts, warm);
    case PenaltyKind::AdaptiveLasso: {
      if (pilot) return fit_adaptive(A, lambda, cfg.adaptive_gamma, *pilot, opts, warm);
      const SymmetricMatrix local = initial_estimate(A, n, opts);
      return fit_adaptive(A, lambda, cfg.adaptive_gamma, local, opts, warm);
    }
  }
  throw std::invalid_argument("fit_penalized: unknown penalty kind");
}

}  // namespace covsel
