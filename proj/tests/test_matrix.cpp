#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "covsel/matrix.hpp"

using covsel::CholeskyFactor;
using covsel::DataMatrix;
using covsel::NotPositiveDefinite;
using covsel::SymmetricMatrix;
using Catch::Approx;

namespace {

DataMatrix make_data(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(rows.begin()->size());
  DataMatrix X(n, p);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) X(i, j++) = v;
    ++i;
  }
  return X;
}

}  // namespace

TEST_CASE("sample covariance of centered two-point data", "[matrix]") {
  const auto S = covsel::sample_covariance(make_data({{1.0}, {-1.0}}), true);
  REQUIRE(S.dim() == 1);
  CHECK(S(0, 0) == Approx(1.0).margin(1e-15));
}

TEST_CASE("sample covariance of constant data is zero", "[matrix]") {
  const auto S = covsel::sample_covariance(make_data({{0.0, 0.0}, {0.0, 0.0}}), true);
  REQUIRE(S.dim() == 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(S(i, j) == 0.0);
}

TEST_CASE("sample covariance centers with the sample mean and divides by n", "[matrix]") {
  const auto S = covsel::sample_covariance(make_data({{2.0}, {0.0}}), true);
  CHECK(S(0, 0) == Approx(1.0).margin(1e-15));
}

TEST_CASE("uncentered covariance uses mean zero", "[matrix]") {
  const auto S = covsel::sample_covariance(make_data({{2.0}, {0.0}}), false);
  CHECK(S(0, 0) == Approx(2.0).margin(1e-15));
}

TEST_CASE("sample covariance rejects bad input", "[matrix]") {
  CHECK_THROWS_AS(covsel::sample_covariance(make_data({{1.0}}), true), std::invalid_argument);
  auto X = make_data({{1.0}, {2.0}});
  X(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(covsel::sample_covariance(X, true), std::invalid_argument);
}

TEST_CASE("cholesky of the identity is the identity", "[matrix]") {
  const auto L = covsel::cholesky(SymmetricMatrix::identity(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) CHECK(L(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-15));
}

TEST_CASE("cholesky of a diagonal matrix takes square roots", "[matrix]") {
  const auto L = covsel::cholesky(SymmetricMatrix::diagonal({4.0, 9.0}));
  CHECK(L(0, 0) == Approx(2.0).margin(1e-15));
  CHECK(L(1, 0) == 0.0);
  CHECK(L(1, 1) == Approx(3.0).margin(1e-15));
}

TEST_CASE("cholesky separates near-singular from indefinite", "[matrix]") {
  CHECK_NOTHROW(covsel::cholesky(
      SymmetricMatrix::from_rows({{1.0, 0.99999999}, {0.99999999, 1.0}})));
  CHECK_THROWS_AS(covsel::cholesky(SymmetricMatrix::from_rows({{1.0, 1.1}, {1.1, 1.0}})),
                  NotPositiveDefinite);
}

TEST_CASE("log determinant closed forms", "[matrix]") {
  CHECK(covsel::log_det(SymmetricMatrix::identity(5)) == Approx(0.0).margin(1e-14));
  CHECK(covsel::log_det(SymmetricMatrix::diagonal({2.0, 4.0})) == Approx(std::log(8.0)));
  const auto band3 =
      SymmetricMatrix::from_rows({{1.0, 0.5, 0.0}, {0.5, 1.0, 0.5}, {0.0, 0.5, 1.0}});
  CHECK(covsel::log_det(band3) == Approx(std::log(0.5)));
}

TEST_CASE("inverse of simple matrices", "[matrix]") {
  const auto I4 = covsel::inverse_spd(SymmetricMatrix::identity(4));
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) CHECK(I4(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-14));

  const auto D = covsel::inverse_spd(SymmetricMatrix::diagonal({2.0, 5.0}));
  CHECK(D(0, 0) == Approx(0.5).margin(1e-15));
  CHECK(D(1, 1) == Approx(0.2).margin(1e-15));

  const auto M = SymmetricMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
  const auto Minv = covsel::inverse_spd(M);
  CHECK(Minv(0, 0) == Approx(2.0 / 3.0));
  CHECK(Minv(0, 1) == Approx(-1.0 / 3.0));
  CHECK(Minv(1, 1) == Approx(2.0 / 3.0));
}

TEST_CASE("inverse satisfies the residual bound on random problems", "[matrix]") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> off(-0.4, 0.4);
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 2 + trial;
    SymmetricMatrix M(p);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) M.at(i, j) = off(rng);
      M.at(i, i) = 1.0 + 0.5 * p;
    }
    const auto Minv = covsel::inverse_spd(M);
    double worst = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        double s = 0.0;
        for (int k = 0; k < p; ++k) s += M(i, k) * Minv(k, j);
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    CHECK(worst <= 1e-8 * p);
  }
}

TEST_CASE("trace product closed forms and dimension guard", "[matrix]") {
  CHECK(covsel::trace_product(SymmetricMatrix::identity(3), SymmetricMatrix::identity(3)) ==
        Approx(3.0));
  CHECK(covsel::trace_product(SymmetricMatrix::diagonal({1.0, 2.0}),
                              SymmetricMatrix::diagonal({3.0, 4.0})) == Approx(11.0));
  CHECK(covsel::trace_product(SymmetricMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}),
                              SymmetricMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})) ==
        Approx(4.0));
  CHECK_THROWS_AS(
      covsel::trace_product(SymmetricMatrix::identity(2), SymmetricMatrix::identity(3)),
      std::invalid_argument);
}

TEST_CASE("log determinants of a matrix and its inverse cancel", "[matrix]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> off(-0.3, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 7;
    SymmetricMatrix M(p);
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) M.at(i, j) = off(rng);
      M.at(i, i) = 1.0 + 0.4 * p;
    }
    const double combined =
        std::exp(covsel::log_det(M)) * std::exp(covsel::log_det(covsel::inverse_spd(M)));
    CHECK(combined == Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("cholesky recovers a random lower-triangular factor", "[matrix]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> diag(0.5, 2.0), off(-1.0, 1.0);
  for (int p : {2, 5, 11, 20}) {
    CholeskyFactor L(p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < i; ++j) L.at(i, j) = off(rng);
      L.at(i, i) = diag(rng);
    }
    SymmetricMatrix M(p);
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) {
        double s = 0.0;
        for (int k = 0; k <= std::min(i, j); ++k) s += L(i, k) * L(j, k);
        M.at(i, j) = s;
      }
    const auto R = covsel::cholesky(M);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j <= i; ++j) CHECK(R(i, j) == Approx(L(i, j)).margin(1e-10));
  }
}

TEST_CASE("sample covariance is positive semidefinite", "[matrix]") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial;  // includes n < p cases, where S is singular but PSD
    const int p = 6;
    DataMatrix X(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) X(i, j) = z(rng);
    auto S = covsel::sample_covariance(X, true);
    const double scale = std::max(1.0, S.trace());
    for (int i = 0; i < p; ++i) S.at(i, i) += 1e-9 * scale;
    CHECK_NOTHROW(covsel::cholesky(S));
  }
}

TEST_CASE("data matrix row selection preserves values", "[matrix]") {
  const auto X = make_data({{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
  const auto Y = X.take_rows({2, 0});
  REQUIRE(Y.rows() == 2);
  REQUIRE(Y.cols() == 2);
  CHECK(Y(0, 0) == 5.0);
  CHECK(Y(0, 1) == 6.0);
  CHECK(Y(1, 0) == 1.0);
  CHECK(Y(1, 1) == 2.0);
}
