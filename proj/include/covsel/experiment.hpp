#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "covsel/estimators.hpp"
#include "covsel/matrix.hpp"
#include "covsel/metrics.hpp"
#include "covsel/penalty.hpp"
#include "covsel/simdata.hpp"
#include "covsel/tuning.hpp"

namespace covsel {

struct ExperimentConfig {
  GraphModel model;
  int n = 100;
  int reps = 100;
  std::vector<PenaltyKind> penalties;
  std::vector<Criterion> criteria;
  int folds = 5;
  int grid_count = 50;
  double grid_ratio = 0.01;
  std::uint64_t base_seed = 0;
  int parallelism = 1;
  FitOptions fit;

  void validate() const {
    model.validate();
    fit.validate();
    if (n < 2) throw std::invalid_argument("ExperimentConfig: n must be at least 2");
    if (reps < 1) throw std::invalid_argument("ExperimentConfig: reps must be at least 1");
    if (penalties.empty() || criteria.empty())
      throw std::invalid_argument("ExperimentConfig: penalties and criteria must be nonempty");
    if (folds < 2) throw std::invalid_argument("ExperimentConfig: folds must be at least 2");
    for (Criterion c : criteria)
      if (c == Criterion::Cv && n < 2 * folds)
        throw std::invalid_argument("ExperimentConfig: CV needs n >= 2 * folds");
    if (grid_count < 1) throw std::invalid_argument("ExperimentConfig: grid_count must be >= 1");
    if (!(grid_ratio > 0) || grid_ratio >= 1)
      throw std::invalid_argument("ExperimentConfig: grid_ratio must lie in (0, 1)");
    if (parallelism < 1)
      throw std::invalid_argument("ExperimentConfig: parallelism must be at least 1");
  }
};

/// One (penalty, criterion) cell of one replication.
struct CellResult {
  PenaltyKind penalty = PenaltyKind::Lasso;
  Criterion criterion = Criterion::Bic;
  bool ok = false;
  std::string error;  // set when !ok
  double lambda = 0.0;
  int edge_count = 0;
  ConfusionCounts counts;
  double spec = 0.0;
  double sens = 0.0;
  double mcc_value = 0.0;
};

struct RepRecord {
  int rep = 0;
  std::uint64_t seed = 0;
  std::vector<CellResult> cells;  // penalty-major, criterion-minor, config order
};

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample SD, divisor reps_used - 1; 0 when reps_used <= 1
};

struct ComboAggregate {
  PenaltyKind penalty = PenaltyKind::Lasso;
  Criterion criterion = Criterion::Bic;
  int reps_used = 0;
  int failures = 0;
  MetricSummary spec;
  MetricSummary sens;
  MetricSummary mcc;
};

struct ExperimentReport {
  ExperimentConfig config;
  TrueModel truth;
  std::vector<RepRecord> reps;
  std::vector<ComboAggregate> aggregates;
  double wall_seconds = 0.0;
  // The tabulated dispersion is the standard deviation across replications,
  // not the standard error of the reported mean.
  std::string dispersion_note =
      "sd fields are standard deviations over replications, not standard errors of the mean";
};

namespace detail {

inline MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

inline RepRecord run_one_rep(const ExperimentConfig& cfg, const TrueModel& truth, int rep) {
  RepRecord rec;
  rec.rep = rep;
  rec.seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
  const int p = truth.C0.dim();
  try {
    const DataMatrix X = sample_mvn(truth, cfg.n, rec.seed);
    const SymmetricMatrix A = sample_covariance(X, /*center=*/true);
    const LambdaGrid grid = default_grid(A, cfg.grid_count, cfg.grid_ratio);
    for (PenaltyKind penalty : cfg.penalties)
      for (Criterion criterion : cfg.criteria) {
        CellResult cell;
        cell.penalty = penalty;
        cell.criterion = criterion;
        try {
          const SelectionResult sel =
              select(X, PenaltyConfig{penalty}, criterion, grid, cfg.folds, rec.seed, cfg.fit);
          cell.lambda = sel.best_lambda;
          cell.edge_count = static_cast<int>(sel.best_fit.edges.size());
          cell.counts = confusion(sel.best_fit.edges, truth.edges, p);
          cell.spec = specificity(cell.counts);
          cell.sens = sensitivity(cell.counts);
          cell.mcc_value = mcc(cell.counts);
          cell.ok = true;
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        rec.cells.push_back(std::move(cell));
      }
  } catch (const std::exception& e) {
    rec.cells.clear();
    for (PenaltyKind penalty : cfg.penalties)
      for (Criterion criterion : cfg.criteria) {
        CellResult cell;
        cell.penalty = penalty;
        cell.criterion = criterion;
        cell.error = e.what();
        rec.cells.push_back(std::move(cell));
      }
  }
  return rec;
}

}  // namespace detail

/// Run the full simulation: one true model, `reps` seeded data draws
/// (replication r uses base_seed + r), each scored for every (penalty,
/// criterion) combination against the true edge set. Replications fan out
/// over `parallelism` workers; per-rep seeds make the result independent of
/// scheduling, and aggregation walks records in replication order. A failed
/// cell is recorded with its message and excluded from that combination's
/// aggregate; the experiment itself fails only when a combination loses
/// more than 20% of its replications.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.config = cfg;
  report.truth = true_precision(cfg.model);
  report.reps.resize(static_cast<std::size_t>(cfg.reps));

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= cfg.reps) break;
      report.reps[static_cast<std::size_t>(r)] = detail::run_one_rep(cfg, report.truth, r);
    }
  };
  const int threads = std::min(cfg.parallelism, cfg.reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::size_t combos = cfg.penalties.size() * cfg.criteria.size();
  for (std::size_t ci = 0; ci < combos; ++ci) {
    ComboAggregate agg;
    agg.penalty = cfg.penalties[ci / cfg.criteria.size()];
    agg.criterion = cfg.criteria[ci % cfg.criteria.size()];
    std::vector<double> spec_v, sens_v, mcc_v;
    for (const RepRecord& rec : report.reps) {
      const CellResult& cell = rec.cells[ci];
      if (!cell.ok) {
        ++agg.failures;
        continue;
      }
      spec_v.push_back(cell.spec);
      sens_v.push_back(cell.sens);
      mcc_v.push_back(cell.mcc_value);
    }
    agg.reps_used = static_cast<int>(spec_v.size());
    agg.spec = detail::summarize(spec_v);
    agg.sens = detail::summarize(sens_v);
    agg.mcc = detail::summarize(mcc_v);
    if (agg.failures * 5 > cfg.reps)
      throw std::runtime_error(std::string("run_experiment: ") + penalty_name(agg.penalty) +
                               "+" + criterion_name(agg.criterion) + " failed in " +
                               std::to_string(agg.failures) + " of " +
                               std::to_string(cfg.reps) + " replications");
    report.aggregates.push_back(std::move(agg));
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

/// Published reference cell for one (penalty, criterion) combination of a
/// tabulated scenario: means with dispersion in the same SD convention.
struct ReferenceCell {
  double spec_mean = 0.0, spec_sd = 0.0;
  double sens_mean = 0.0, sens_sd = 0.0;
  double mcc_mean = 0.0, mcc_sd = 0.0;
};

struct ScenarioResult {
  int p = 0;
  int n = 0;
  ExperimentReport report;
  // Parallel to report.aggregates; populated at full scale only.
  std::vector<std::optional<ReferenceCell>> reference;
};

enum class Scale { Full, Desk };

struct TableReplication {
  int table = 0;
  Scale scale = Scale::Desk;
  int reps = 0;
  std::uint64_t base_seed = 0;
  std::vector<ScenarioResult> scenarios;
};

namespace detail {

// Reference results, indexed [scenario][criterion][penalty] with
// scenario in {(35,100), (75,100), (35,10000)}, criterion in {BIC, CV},
// penalty in {lasso, scad, adaptive}. Cell order: spec, sd, sens, sd, mcc, sd.
inline const double kReferenceTable[3][3][2][3][6] = {
    {  // banded model, first-order
     {{{0.695, 0.032, 1.000, 0.000, 0.402, 0.025},
       {0.710, 0.020, 1.000, 0.000, 0.413, 0.017},
       {0.849, 0.021, 1.000, 0.000, 0.568, 0.030}},
      {{0.620, 0.025, 1.000, 0.000, 0.348, 0.016},
       {0.705, 0.016, 1.000, 0.000, 0.410, 0.013},
       {0.824, 0.016, 1.000, 0.000, 0.533, 0.021}}},
     {{{0.791, 0.018, 1.000, 0.000, 0.362, 0.017},
       {0.739, 0.015, 1.000, 0.000, 0.318, 0.011},
       {0.867, 0.011, 0.998, 0.005, 0.453, 0.016}},
      {{0.712, 0.017, 1.000, 0.000, 0.299, 0.012},
       {0.749, 0.006, 1.000, 0.000, 0.325, 0.005},
       {0.901, 0.007, 0.997, 0.005, 0.515, 0.015}}},
     {{{0.721, 0.025, 1.000, 0.000, 0.424, 0.022},
       {0.981, 0.006, 1.000, 0.000, 0.902, 0.028},
       {0.965, 0.008, 1.000, 0.000, 0.839, 0.029}},
      {{0.521, 0.030, 1.000, 0.000, 0.290, 0.016},
       {0.976, 0.007, 1.000, 0.000, 0.880, 0.031},
       {0.917, 0.017, 1.000, 0.000, 0.697, 0.040}}}},
    {  // banded model, second-order
     {{{0.986, 0.013, 0.459, 0.113, 0.585, 0.055},
       {0.982, 0.016, 0.519, 0.114, 0.616, 0.050},
       {0.954, 0.029, 0.754, 0.135, 0.703, 0.051}},
      {{0.657, 0.050, 0.960, 0.026, 0.432, 0.036},
       {0.812, 0.058, 0.905, 0.056, 0.554, 0.045},
       {0.865, 0.028, 0.910, 0.039, 0.627, 0.039}}},
     {{{0.996, 0.003, 0.382, 0.065, 0.563, 0.035},
       {0.995, 0.003, 0.420, 0.065, 0.579, 0.032},
       {0.992, 0.005, 0.486, 0.091, 0.610, 0.041}},
      {{0.837, 0.043, 0.887, 0.031, 0.445, 0.036},
       {0.895, 0.024, 0.829, 0.045, 0.503, 0.027},
       {0.998, 0.002, 0.362, 0.058, 0.563, 0.039}}},
     {{{0.806, 0.031, 1.000, 0.000, 0.606, 0.038},
       {1.000, 0.000, 1.000, 0.000, 1.000, 0.000},
       {0.984, 0.006, 1.000, 0.000, 0.954, 0.020}},
      {{0.470, 0.032, 1.000, 0.000, 0.330, 0.019},
       {0.997, 0.007, 1.000, 0.000, 0.991, 0.023},
       {0.931, 0.020, 1.000, 0.000, 0.810, 0.045}}}},
    {  // sparse geometric model
     {{{0.983, 0.012, 0.460, 0.073, 0.562, 0.044},
       {0.992, 0.015, 0.366, 0.117, 0.538, 0.052},
       {0.988, 0.011, 0.458, 0.092, 0.584, 0.053}},
      {{0.988, 0.067, 0.363, 0.095, 0.546, 0.049},
       {0.998, 0.003, 0.354, 0.059, 0.558, 0.042},
       {0.995, 0.003, 0.423, 0.060, 0.591, 0.051}}},
     {{{0.992, 0.003, 0.416, 0.040, 0.539, 0.032},
       {0.997, 0.006, 0.339, 0.072, 0.534, 0.026},
       {0.995, 0.003, 0.389, 0.045, 0.541, 0.030}},
      {{0.998, 0.001, 0.353, 0.030, 0.555, 0.027},
       {0.998, 0.001, 0.353, 0.030, 0.549, 0.023},
       {1.000, 0.000, 0.303, 0.024, 0.536, 0.019}}},
     {{{0.932, 0.017, 1.000, 0.000, 0.769, 0.044},
       {0.999, 0.002, 1.000, 0.000, 0.996, 0.009},
       {0.992, 0.004, 1.000, 0.000, 0.966, 0.019}},
      {{0.657, 0.045, 1.000, 0.000, 0.407, 0.034},
       {0.997, 0.003, 1.000, 0.000, 0.991, 0.017},
       {0.959, 0.029, 1.000, 0.000, 0.851, 0.081}}}}};

inline std::optional<ReferenceCell> lookup_reference(int table, int scenario,
                                                     PenaltyKind penalty, Criterion criterion) {
  const int ci = criterion == Criterion::Bic ? 0 : 1;
  int pi = 0;
  switch (penalty) {
    case PenaltyKind::Lasso:
      pi = 0;
      break;
    case PenaltyKind::Scad:
      pi = 1;
      break;
    case PenaltyKind::AdaptiveLasso:
      pi = 2;
      break;
  }
  const double* v = kReferenceTable[table - 1][scenario][ci][pi];
  ReferenceCell cell;
  cell.spec_mean = v[0];
  cell.spec_sd = v[1];
  cell.sens_mean = v[2];
  cell.sens_sd = v[3];
  cell.mcc_mean = v[4];
  cell.mcc_sd = v[5];
  return cell;
}

}  // namespace detail

/// Reproduce one tabulated study: three (p, n) scenarios, all three
/// penalties, both criteria. Full scale runs the published sizes
/// {(35,100), (75,100), (35,10000)} and attaches the published cells for
/// side-by-side comparison; desk scale substitutes {(20,100), (40,60),
/// (20,5000)} to bound runtime and attaches no reference values.
inline TableReplication replicate_table(int table, int reps, Scale scale,
                                        std::uint64_t base_seed = 0, int parallelism = 1) {
  if (table < 1 || table > 3)
    throw std::invalid_argument("replicate_table: table must be 1, 2, or 3");
  if (reps < 1) throw std::invalid_argument("replicate_table: reps must be at least 1");

  const GraphKind kind = table == 1   ? GraphKind::Ar1
                         : table == 2 ? GraphKind::Ar2
                                      : GraphKind::SparseGeometric;
  struct Size {
    int p, n;
  };
  const Size sizes_full[3] = {{35, 100}, {75, 100}, {35, 10000}};
  const Size sizes_desk[3] = {{20, 100}, {40, 60}, {20, 5000}};
  const Size* sizes = scale == Scale::Full ? sizes_full : sizes_desk;

  TableReplication out;
  out.table = table;
  out.scale = scale;
  out.reps = reps;
  out.base_seed = base_seed;
  for (int s = 0; s < 3; ++s) {
    ExperimentConfig cfg;
    cfg.model.kind = kind;
    cfg.model.p = sizes[s].p;
    cfg.model.seed = base_seed;
    cfg.n = sizes[s].n;
    cfg.reps = reps;
    cfg.penalties = {PenaltyKind::Lasso, PenaltyKind::Scad, PenaltyKind::AdaptiveLasso};
    cfg.criteria = {Criterion::Bic, Criterion::Cv};
    cfg.base_seed = base_seed;
    cfg.parallelism = parallelism;

    ScenarioResult scenario;
    scenario.p = sizes[s].p;
    scenario.n = sizes[s].n;
    scenario.report = run_experiment(cfg);
    for (const ComboAggregate& agg : scenario.report.aggregates)
      scenario.reference.push_back(scale == Scale::Full
                                       ? detail::lookup_reference(table, s, agg.penalty,
                                                                  agg.criterion)
                                       : std::nullopt);
    out.scenarios.push_back(std::move(scenario));
  }
  return out;
}

}  // namespace covsel
