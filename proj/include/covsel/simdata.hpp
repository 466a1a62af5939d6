#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "covsel/matrix.hpp"
#include "covsel/seeding.hpp"

namespace covsel {

enum class GraphKind { Ar1, Ar2, SparseGeometric };

inline const char* graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::Ar1:
      return "ar1";
    case GraphKind::Ar2:
      return "ar2";
    case GraphKind::SparseGeometric:
      return "geo";
  }
  return "unknown";
}

struct GraphModel {
  GraphKind kind = GraphKind::Ar1;
  int p = 0;
  int neighbors = 3;          // SparseGeometric only
  std::uint64_t seed = 0;     // SparseGeometric layout only

  void validate() const {
    switch (kind) {
      case GraphKind::Ar1:
        if (p < 2) throw std::invalid_argument("GraphModel: Ar1 needs p >= 2");
        break;
      case GraphKind::Ar2:
        if (p < 3) throw std::invalid_argument("GraphModel: Ar2 needs p >= 3");
        break;
      case GraphKind::SparseGeometric:
        if (p < 2) throw std::invalid_argument("GraphModel: SparseGeometric needs p >= 2");
        if (neighbors < 1 || neighbors >= p)
          throw std::invalid_argument("GraphModel: neighbors must satisfy 1 <= neighbors < p");
        break;
    }
  }
};

struct TrueModel {
  SymmetricMatrix C0;       // true precision
  SymmetricMatrix Sigma0;   // its inverse
  std::vector<std::pair<int, int>> edges;  // (i,j), i<j, c0_ij != 0
};

namespace detail {

inline std::vector<std::pair<int, int>> offdiag_support(const SymmetricMatrix& C) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < C.dim(); ++i)
    for (int j = i + 1; j < C.dim(); ++j)
      if (C(i, j) != 0.0) edges.emplace_back(i, j);
  return edges;
}

// Banded precision: given diagonal value and band values (band[b] sits on
// the |i-j| = b+1 off-diagonals).
inline SymmetricMatrix banded_precision(int p, double diag, const std::vector<double>& bands) {
  SymmetricMatrix C(p);
  for (int i = 0; i < p; ++i) {
    C.at(i, i) = diag;
    for (std::size_t b = 0; b < bands.size(); ++b) {
      const int j = i + static_cast<int>(b) + 1;
      if (j < p) C.at(i, j) = bands[b];
    }
  }
  return C;
}

// Undirected nearest-neighbor graph on points in the unit square: node i is
// adjacent to the `neighbors` nodes nearest to it (ties broken by smaller
// index), and the edge set is the union over endpoints.
inline std::vector<std::vector<char>> knn_adjacency(const std::vector<double>& x,
                                                    const std::vector<double>& y,
                                                    int neighbors) {
  const int p = static_cast<int>(x.size());
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(p),
                                     std::vector<char>(static_cast<std::size_t>(p), 0));
  std::vector<std::pair<double, int>> dist;
  for (int i = 0; i < p; ++i) {
    dist.clear();
    for (int j = 0; j < p; ++j) {
      if (j == i) continue;
      const double dx = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      const double dy = y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)];
      dist.emplace_back(dx * dx + dy * dy, j);
    }
    std::sort(dist.begin(), dist.end());  // by squared distance, then smaller index
    for (int k = 0; k < neighbors; ++k) {
      const int j = dist[static_cast<std::size_t>(k)].second;
      adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
      adj[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
    }
  }
  return adj;
}

}  // namespace detail

/// The true precision matrix for one of the three graph models.
///
/// Ar1: unit diagonal with 0.5 on the first off-diagonal. Ar2: diagonal 1.5
/// with 0.5 and 0.4 on the first and second off-diagonals. SparseGeometric:
/// p points uniform on the unit square, each connected to its `neighbors`
/// nearest points (union over endpoints); edge entries drawn uniformly from
/// [-1,-0.5] U [0.5,1] (fair-coin sign, then magnitude), and the diagonal
/// set to twice the row's absolute off-diagonal sum, which makes the matrix
/// strictly diagonally dominant and hence positive definite.
inline TrueModel true_precision(const GraphModel& model) {
  model.validate();
  TrueModel truth;
  switch (model.kind) {
    case GraphKind::Ar1:
      truth.C0 = detail::banded_precision(model.p, 1.0, {0.5});
      break;
    case GraphKind::Ar2:
      truth.C0 = detail::banded_precision(model.p, 1.5, {0.5, 0.4});
      break;
    case GraphKind::SparseGeometric: {
      const int p = model.p;
      std::mt19937_64 rng = seeded_engine(model.seed, kStreamLayout);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<double> x(static_cast<std::size_t>(p)), y(static_cast<std::size_t>(p));
      for (int i = 0; i < p; ++i) {
        x[static_cast<std::size_t>(i)] = unit(rng);
        y[static_cast<std::size_t>(i)] = unit(rng);
      }
      const auto adj = detail::knn_adjacency(x, y, model.neighbors);

      SymmetricMatrix C(p);
      std::bernoulli_distribution coin(0.5);
      std::uniform_real_distribution<double> magnitude(0.5, 1.0);
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
          if (adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
            const double sign = coin(rng) ? 1.0 : -1.0;
            C.at(i, j) = sign * magnitude(rng);
          }
      for (int i = 0; i < p; ++i) {
        double row_abs = 0.0;
        for (int j = 0; j < p; ++j)
          if (j != i) row_abs += std::abs(C(i, j));
        C.at(i, i) = row_abs > 0 ? 2.0 * row_abs : 1.0;
      }
      truth.C0 = std::move(C);
      break;
    }
  }
  truth.Sigma0 = inverse_spd(truth.C0);  // also certifies positive definiteness
  truth.edges = detail::offdiag_support(truth.C0);
  return truth;
}

/// n rows X_i = L z_i with Sigma0 = L L' and z_i seeded standard normal
/// vectors; a pure function of (truth, n, seed).
inline DataMatrix sample_mvn(const TrueModel& truth, int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_mvn: n must be at least 2");
  const int p = truth.Sigma0.dim();
  const CholeskyFactor L = cholesky(truth.Sigma0);
  std::mt19937_64 rng = seeded_engine(seed, kStreamMvn);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DataMatrix X(n, p);
  std::vector<double> z(static_cast<std::size_t>(p));
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < p; ++j) z[static_cast<std::size_t>(j)] = gauss(rng);
    const std::vector<double> row = L.apply(z);
    for (int j = 0; j < p; ++j) X(r, j) = row[static_cast<std::size_t>(j)];
  }
  return X;
}

}  // namespace covsel
