#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "covsel/estimators.hpp"
#include "covsel/glasso.hpp"
#include "covsel/matrix.hpp"
#include "covsel/penalty.hpp"
#include "covsel/seeding.hpp"

namespace covsel {

enum class Criterion { Bic, Cv };

inline const char* criterion_name(Criterion c) {
  return c == Criterion::Bic ? "bic" : "cv";
}

struct LambdaGrid {
  std::vector<double> values;  // strictly descending, all positive

  void validate() const {
    if (values.empty()) throw std::invalid_argument("LambdaGrid: empty grid");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0)) throw std::invalid_argument("LambdaGrid: values must be positive");
      if (i > 0 && !(values[i] < values[i - 1]))
        throw std::invalid_argument("LambdaGrid: values must be strictly descending");
    }
  }
};

/// Log-spaced grid from lambda_max = max_{i != j} |a_ij| (the smallest
/// lambda that fully sparsifies under uniform weights) down to
/// ratio * lambda_max. An A with no off-diagonal signal yields the single
/// tiny value 1e-8.
inline LambdaGrid default_grid(const SymmetricMatrix& A, int count = 50, double ratio = 0.01) {
  if (count < 1) throw std::invalid_argument("default_grid: count must be at least 1");
  if (!(ratio > 0) || ratio >= 1)
    throw std::invalid_argument("default_grid: ratio must lie in (0, 1)");
  const double lambda_max = A.max_abs_offdiag();
  LambdaGrid grid;
  if (lambda_max == 0.0) {
    grid.values = {1e-8};
    return grid;
  }
  if (count == 1) {
    grid.values = {lambda_max};
    return grid;
  }
  grid.values.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    grid.values.push_back(lambda_max *
                          std::pow(ratio, static_cast<double>(k) / (count - 1)));
  return grid;
}

/// -log|C_hat| + tr(C_hat A) + (log n / n) * #{off-diagonal nonzeros, i<j}.
/// The edge count is the solver's exact-zero pattern, not a re-thresholding.
inline double bic_score(const GlassoSolution& fit, const SymmetricMatrix& A, int n) {
  if (n < 2) throw std::invalid_argument("bic_score: n must be at least 2");
  return -log_det(fit.C_hat) + trace_product(fit.C_hat, A) +
         std::log(static_cast<double>(n)) / n * static_cast<double>(fit.edges.size());
}

/// Partition {0,...,n-1} into K folds by a seeded uniform shuffle; sizes as
/// equal as possible (the first n mod K folds get one extra row). Each fold
/// is returned with its row indices in ascending order.
inline std::vector<std::vector<int>> cv_folds(int n, int K, std::uint64_t seed) {
  if (K < 2) throw std::invalid_argument("cv_folds: K must be at least 2");
  if (n < 2 * K)
    throw std::invalid_argument("cv_folds: need at least 2 rows per fold (n >= 2K)");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng = seeded_engine(seed, kStreamFolds);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<int>> folds(static_cast<std::size_t>(K));
  std::size_t pos = 0;
  for (int k = 0; k < K; ++k) {
    const int size = n / K + (k < n % K ? 1 : 0);
    folds[static_cast<std::size_t>(k)].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                              order.begin() + static_cast<std::ptrdiff_t>(pos) +
                                                  size);
    std::sort(folds[static_cast<std::size_t>(k)].begin(),
              folds[static_cast<std::size_t>(k)].end());
    pos += static_cast<std::size_t>(size);
  }
  return folds;
}

namespace detail {

// Per-fold material for cross-validation: training/test covariances (each
// centered with its own mean, so no test-set leakage) and, for the adaptive
// penalty, a pilot computed inside the training fold only.
struct CvContext {
  std::vector<SymmetricMatrix> A_train;
  std::vector<SymmetricMatrix> A_test;
  std::vector<int> n_train;
  std::vector<int> n_test;
  std::vector<SymmetricMatrix> pilots;  // empty unless the penalty is adaptive
};

inline CvContext make_cv_context(const DataMatrix& X, int K, std::uint64_t seed,
                                 PenaltyKind kind, const FitOptions& opts) {
  const auto folds = cv_folds(X.rows(), K, seed);
  CvContext ctx;
  std::vector<char> in_fold(static_cast<std::size_t>(X.rows()));
  for (const auto& fold : folds) {
    std::fill(in_fold.begin(), in_fold.end(), 0);
    for (int r : fold) in_fold[static_cast<std::size_t>(r)] = 1;
    std::vector<int> train;
    train.reserve(static_cast<std::size_t>(X.rows()) - fold.size());
    for (int r = 0; r < X.rows(); ++r)
      if (!in_fold[static_cast<std::size_t>(r)]) train.push_back(r);
    ctx.A_train.push_back(sample_covariance(X.take_rows(train), /*center=*/true));
    ctx.A_test.push_back(sample_covariance(X.take_rows(fold), /*center=*/true));
    ctx.n_train.push_back(static_cast<int>(train.size()));
    ctx.n_test.push_back(static_cast<int>(fold.size()));
    if (kind == PenaltyKind::AdaptiveLasso)
      ctx.pilots.push_back(initial_estimate(ctx.A_train.back(), ctx.n_train.back(), opts));
  }
  return ctx;
}

inline double predictive_score(const GlassoSolution& fit, const SymmetricMatrix& A_test,
                               int n_test) {
  return n_test * (-log_det(fit.C_hat) + trace_product(fit.C_hat, A_test));
}

}  // namespace detail

/// K-fold cross-validation score at a single lambda:
///   CV(lambda) = sum_k n_k (-log|C_hat_{-k}| + tr(C_hat_{-k} A_k)),
/// with C_hat_{-k} fit on fold k's complement. Adaptive weights and LLA
/// reweighting are re-run inside each training fold.
inline double cv_score(const DataMatrix& X, double lambda, const PenaltyConfig& penalty,
                       int K, std::uint64_t seed, const FitOptions& opts = {}) {
  const detail::CvContext ctx = detail::make_cv_context(X, K, seed, penalty.kind, opts);
  double total = 0.0;
  for (std::size_t k = 0; k < ctx.A_train.size(); ++k) {
    const SymmetricMatrix* pilot = ctx.pilots.empty() ? nullptr : &ctx.pilots[k];
    try {
      const GlassoSolution fit = fit_penalized(ctx.A_train[k], ctx.n_train[k], lambda,
                                               penalty, opts, nullptr, pilot);
      total += detail::predictive_score(fit, ctx.A_test[k], ctx.n_test[k]);
    } catch (const NotPositiveDefinite& e) {
      throw NotPositiveDefinite("cv_score: fold " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  return total;
}

struct SelectionResult {
  struct PathPoint {
    double lambda = 0.0;
    double score = 0.0;
    int edge_count = 0;
  };

  Criterion criterion = Criterion::Bic;
  PenaltyKind penalty = PenaltyKind::Lasso;
  double best_lambda = 0.0;
  GlassoSolution best_fit;
  std::vector<PathPoint> path;  // descending lambda; failed grid values omitted
  std::uint64_t seed = 0;       // CV only
  int folds = 0;                // CV only
};

/// Fit the whole grid (warm-started, descending) and return the lambda that
/// minimizes the criterion, ties broken toward larger lambda. BIC scores the
/// full-sample fit against the full-sample covariance; CV refits per fold and
/// the reported best_fit is the full-sample fit at best_lambda. Grid values
/// where the solver cannot produce a positive definite estimate are dropped
/// from the path; if none survive, this throws.
inline SelectionResult select(const DataMatrix& X, const PenaltyConfig& penalty,
                              Criterion criterion, const LambdaGrid& grid, int folds = 5,
                              std::uint64_t seed = 0, const FitOptions& opts = {}) {
  grid.validate();
  opts.validate();
  const int n = X.rows();
  const SymmetricMatrix A = sample_covariance(X, /*center=*/true);
  const std::size_t m = grid.values.size();

  std::optional<SymmetricMatrix> pilot_full;
  if (penalty.kind == PenaltyKind::AdaptiveLasso) pilot_full = initial_estimate(A, n, opts);
  const SymmetricMatrix* pilot = pilot_full ? &*pilot_full : nullptr;

  // Full-sample path: source of BIC scores, path edge counts, and best_fit.
  std::vector<std::optional<GlassoSolution>> fits(m);
  const GlassoSolution* warm = nullptr;
  for (std::size_t gi = 0; gi < m; ++gi) {
    try {
      fits[gi] = fit_penalized(A, n, grid.values[gi], penalty, opts, warm, pilot);
      warm = &*fits[gi];
    } catch (const NotPositiveDefinite&) {
      fits[gi] = std::nullopt;
    }
  }

  std::vector<std::optional<double>> scores(m);
  if (criterion == Criterion::Bic) {
    for (std::size_t gi = 0; gi < m; ++gi)
      if (fits[gi]) scores[gi] = bic_score(*fits[gi], A, n);
  } else {
    const detail::CvContext ctx = detail::make_cv_context(X, folds, seed, penalty.kind, opts);
    const std::size_t K = ctx.A_train.size();
    std::vector<std::vector<std::optional<double>>> fold_scores(
        K, std::vector<std::optional<double>>(m));
    for (std::size_t k = 0; k < K; ++k) {
      const SymmetricMatrix* fold_pilot = ctx.pilots.empty() ? nullptr : &ctx.pilots[k];
      GlassoSolution last;
      const GlassoSolution* fold_warm = nullptr;
      for (std::size_t gi = 0; gi < m; ++gi) {
        try {
          GlassoSolution fit = fit_penalized(ctx.A_train[k], ctx.n_train[k], grid.values[gi],
                                             penalty, opts, fold_warm, fold_pilot);
          fold_scores[k][gi] = detail::predictive_score(fit, ctx.A_test[k], ctx.n_test[k]);
          last = std::move(fit);
          fold_warm = &last;
        } catch (const NotPositiveDefinite&) {
          fold_scores[k][gi] = std::nullopt;
        }
      }
    }
    // Fixed fold-then-lambda summation order keeps the score reproducible.
    for (std::size_t gi = 0; gi < m; ++gi) {
      double total = 0.0;
      bool ok = fits[gi].has_value();
      for (std::size_t k = 0; k < K && ok; ++k) {
        if (fold_scores[k][gi])
          total += *fold_scores[k][gi];
        else
          ok = false;
      }
      if (ok) scores[gi] = total;
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t gi = 0; gi < m; ++gi) {
    if (!scores[gi] || !fits[gi]) continue;
    if (!best || *scores[gi] < *scores[*best]) best = gi;  // strict: ties keep larger lambda
  }
  if (!best) throw std::runtime_error("select: no grid value produced a usable fit");

  SelectionResult result;
  result.criterion = criterion;
  result.penalty = penalty.kind;
  result.best_lambda = grid.values[*best];
  result.best_fit = *fits[*best];
  for (std::size_t gi = 0; gi < m; ++gi)
    if (scores[gi] && fits[gi])
      result.path.push_back({grid.values[gi], *scores[gi],
                             static_cast<int>(fits[gi]->edges.size())});
  if (criterion == Criterion::Cv) {
    result.seed = seed;
    result.folds = folds;
  }
  return result;
}

}  // namespace covsel
