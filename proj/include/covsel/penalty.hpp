#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "covsel/matrix.hpp"

namespace covsel {

enum class PenaltyKind { Lasso, Scad, AdaptiveLasso };

inline const char* penalty_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::Lasso:
      return "lasso";
    case PenaltyKind::Scad:
      return "scad";
    case PenaltyKind::AdaptiveLasso:
      return "adaptive";
  }
  return "unknown";
}

constexpr double kDefaultScadA = 3.7;
constexpr double kDefaultAdaptiveGamma = 0.5;
constexpr double kDefaultWeightCap = 1e6;

/// SCAD derivative: lambda on [0, lambda], then the linear descent
/// (a*lambda - theta)_+ / (a - 1), zero past a*lambda. Value at theta = 0
/// is the right limit lambda.
inline double scad_derivative(double theta, double lambda, double a) {
  if (theta < 0) throw std::invalid_argument("scad_derivative: negative theta");
  if (lambda <= 0) throw std::invalid_argument("scad_derivative: lambda must be positive");
  if (a <= 2) throw std::invalid_argument("scad_derivative: a must exceed 2");
  if (theta <= lambda) return lambda;
  const double hinge = a * lambda - theta;
  return hinge > 0 ? hinge / (a - 1) : 0.0;
}

/// SCAD value: quadratic spline with knots at lambda and a*lambda,
/// p(0) = 0, plateau (a+1) lambda^2 / 2.
inline double scad_value(double theta, double lambda, double a) {
  if (theta < 0) throw std::invalid_argument("scad_value: negative theta");
  if (lambda <= 0) throw std::invalid_argument("scad_value: lambda must be positive");
  if (a <= 2) throw std::invalid_argument("scad_value: a must exceed 2");
  if (theta <= lambda) return lambda * theta;
  if (theta <= a * lambda)
    return -(theta * theta - 2.0 * a * lambda * theta + lambda * lambda) / (2.0 * (a - 1));
  return (a + 1) * lambda * lambda / 2.0;
}

/// Tagged penalty choice. The weight matrix is required for AdaptiveLasso
/// and ignored otherwise.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::Lasso;
  double lambda = 0.0;
  double a = kDefaultScadA;         // Scad
  double gamma = kDefaultAdaptiveGamma;  // AdaptiveLasso
  std::optional<SymmetricMatrix> weights;  // AdaptiveLasso

  static PenaltySpec lasso(double lambda) {
    PenaltySpec s;
    s.kind = PenaltyKind::Lasso;
    s.lambda = lambda;
    return s;
  }

  static PenaltySpec scad(double lambda, double a = kDefaultScadA) {
    PenaltySpec s;
    s.kind = PenaltyKind::Scad;
    s.lambda = lambda;
    s.a = a;
    return s;
  }

  static PenaltySpec adaptive(double lambda, double gamma, SymmetricMatrix weights) {
    PenaltySpec s;
    s.kind = PenaltyKind::AdaptiveLasso;
    s.lambda = lambda;
    s.gamma = gamma;
    s.weights = std::move(weights);
    return s;
  }

  void validate() const {
    if (lambda < 0) throw std::invalid_argument("PenaltySpec: lambda must be nonnegative");
    if (kind == PenaltyKind::Scad && a <= 2)
      throw std::invalid_argument("PenaltySpec: SCAD a must exceed 2");
    if (kind == PenaltyKind::AdaptiveLasso) {
      if (gamma <= 0) throw std::invalid_argument("PenaltySpec: gamma must be positive");
      if (!weights) throw std::invalid_argument("PenaltySpec: adaptive LASSO requires weights");
      for (int i = 0; i < weights->dim(); ++i)
        for (int j = i; j < weights->dim(); ++j)
          if (!((*weights)(i, j) >= 0) || !std::isfinite((*weights)(i, j)))
            throw std::invalid_argument("PenaltySpec: weights must be nonnegative and finite");
    }
  }
};

/// Per-edge L1 slope at |c_ij| = theta: the weight used when the penalty
/// is linearized for a reweighted solve.
inline double penalty_derivative(const PenaltySpec& spec, double theta, int i, int j) {
  if (theta < 0) throw std::invalid_argument("penalty_derivative: negative theta");
  spec.validate();
  switch (spec.kind) {
    case PenaltyKind::Lasso:
      return spec.lambda;
    case PenaltyKind::Scad:
      return spec.lambda > 0 ? scad_derivative(theta, spec.lambda, spec.a) : 0.0;
    case PenaltyKind::AdaptiveLasso:
      return spec.lambda * (*spec.weights)(i, j);
  }
  throw std::logic_error("penalty_derivative: unknown kind");
}

/// w_ij = min(|c~_ij|^(-gamma), cap) off the diagonal; diagonal weights are
/// zero (the diagonal is never penalized). Exact zeros hit the cap.
inline SymmetricMatrix adaptive_weights(const SymmetricMatrix& C_tilde, double gamma, double cap) {
  if (gamma <= 0) throw std::invalid_argument("adaptive_weights: gamma must be positive");
  if (cap <= 0) throw std::invalid_argument("adaptive_weights: cap must be positive");
  const int p = C_tilde.dim();
  SymmetricMatrix w(p);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const double c = std::abs(C_tilde(i, j));
      w.at(i, j) = c > 0 ? std::min(std::pow(c, -gamma), cap) : cap;
    }
  return w;
}

/// One-step reweighting matrix for SCAD: w_ij = p'_lambda(|c_ij|) at the
/// current iterate, zero diagonal. Entries at exactly zero get the rate
/// lambda (right limit at the origin).
inline SymmetricMatrix lla_weight_matrix(const PenaltySpec& spec, const SymmetricMatrix& C_current) {
  if (spec.kind != PenaltyKind::Scad)
    throw std::invalid_argument("lla_weight_matrix: spec must be SCAD");
  const int p = C_current.dim();
  SymmetricMatrix w(p);
  if (spec.lambda == 0) return w;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      w.at(i, j) = scad_derivative(std::abs(C_current(i, j)), spec.lambda, spec.a);
  return w;
}

}  // namespace covsel
