#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "covsel/experiment.hpp"
#include "covsel/glasso.hpp"
#include "covsel/matrix.hpp"
#include "covsel/metrics.hpp"
#include "covsel/penalty.hpp"
#include "covsel/simdata.hpp"
#include "covsel/tuning.hpp"

namespace covsel {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Bad or unreadable input data (as opposed to invalid arguments or
/// numerical failures).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view token, int row, int col) {
  const std::string_view t = trim(token);
  const auto fail = [&](const char* what) {
    throw DataError(std::string(what) + " at row " + std::to_string(row) + ", column " +
                    std::to_string(col) + ": \"" + std::string(token) + "\"");
  };
  if (t.empty()) fail("missing value");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) fail("not a number");
  if (!std::isfinite(value)) fail("non-finite value");
  return value;
}

}  // namespace detail

/// Comma-separated reals, n rows by p columns, optional single header row,
/// no missing values. Blank lines are ignored.
inline DataMatrix load_csv(const std::string& path, bool header = false) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool header_pending = header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::string_view rest = line;
    int col = 1;
    for (;;) {
      const std::size_t comma = rest.find(',');
      row.push_back(detail::parse_real(rest.substr(0, comma), lineno, col));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      ++col;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError("row " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                      " values, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no data rows in " + path);
  if (rows.size() < 2)
    throw DataError("need at least 2 data rows, got " + std::to_string(rows.size()) + " in " +
                    path);
  DataMatrix X(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < X.rows(); ++i)
    for (int j = 0; j < X.cols(); ++j)
      X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return X;
}

// ---------------------------------------------------------------------------
// Name parsing (CLI-facing).

inline PenaltyKind parse_penalty(std::string_view name) {
  if (name == "lasso") return PenaltyKind::Lasso;
  if (name == "scad") return PenaltyKind::Scad;
  if (name == "adaptive" || name == "adap") return PenaltyKind::AdaptiveLasso;
  throw std::invalid_argument("unknown penalty: " + std::string(name) +
                              " (expected lasso, scad, or adaptive)");
}

inline Criterion parse_criterion(std::string_view name) {
  if (name == "bic") return Criterion::Bic;
  if (name == "cv") return Criterion::Cv;
  throw std::invalid_argument("unknown criterion: " + std::string(name) +
                              " (expected bic or cv)");
}

inline GraphKind parse_graph_kind(std::string_view name) {
  if (name == "ar1") return GraphKind::Ar1;
  if (name == "ar2") return GraphKind::Ar2;
  if (name == "geo") return GraphKind::SparseGeometric;
  throw std::invalid_argument("unknown model: " + std::string(name) +
                              " (expected ar1, ar2, or geo)");
}

inline Scale parse_scale(std::string_view name) {
  if (name == "full") return Scale::Full;
  if (name == "desk") return Scale::Desk;
  throw std::invalid_argument("unknown scale: " + std::string(name) +
                              " (expected full or desk)");
}

inline const char* scale_name(Scale s) { return s == Scale::Full ? "full" : "desk"; }

// ---------------------------------------------------------------------------
// JSON building blocks. Matrices are row-major arrays with their dimension;
// edges are 1-based [i, j] pairs with i < j.

inline json json_of(const SymmetricMatrix& M) {
  json values = json::array();
  for (int i = 0; i < M.dim(); ++i)
    for (int j = 0; j < M.dim(); ++j) values.push_back(M(i, j));
  return json{{"dimension", M.dim()}, {"values", std::move(values)}};
}

inline json json_of(const std::vector<std::pair<int, int>>& edges) {
  json out = json::array();
  for (const auto& [i, j] : edges) out.push_back(json::array({i + 1, j + 1}));
  return out;
}

inline json json_of(const GlassoSolution& sol) {
  return json{{"precision", json_of(sol.C_hat)},
              {"covariance", json_of(sol.W_hat)},
              {"edges", json_of(sol.edges)},
              {"edge_count", sol.edges.size()},
              {"objective", sol.objective},
              {"outer_sweeps", sol.outer_sweeps},
              {"lla_iterations", sol.lla_iterations},
              {"converged", sol.converged}};
}

inline json json_of(const SelectionResult& sel) {
  json path = json::array();
  for (const auto& pt : sel.path)
    path.push_back(json{{"lambda", pt.lambda}, {"score", pt.score},
                        {"edge_count", pt.edge_count}});
  json out{{"criterion", criterion_name(sel.criterion)},
           {"penalty", penalty_name(sel.penalty)},
           {"best_lambda", sel.best_lambda}};
  if (sel.criterion == Criterion::Cv) {
    out["folds"] = sel.folds;
    out["seed"] = sel.seed;
  }
  out["path"] = std::move(path);
  out["best_fit"] = json_of(sel.best_fit);
  return out;
}

inline json json_of(const MetricSummary& s) {
  return json{{"mean", s.mean}, {"sd", s.sd}};
}

inline json json_of(const ConfusionCounts& c) {
  return json{{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
}

inline json json_of(const ExperimentConfig& cfg) {
  json penalties = json::array();
  for (PenaltyKind k : cfg.penalties) penalties.push_back(penalty_name(k));
  json criteria = json::array();
  for (Criterion c : cfg.criteria) criteria.push_back(criterion_name(c));
  json model{{"kind", graph_kind_name(cfg.model.kind)}, {"p", cfg.model.p}};
  if (cfg.model.kind == GraphKind::SparseGeometric) {
    model["neighbors"] = cfg.model.neighbors;
    model["layout_seed"] = cfg.model.seed;
  }
  return json{{"model", std::move(model)},
              {"n", cfg.n},
              {"reps", cfg.reps},
              {"penalties", std::move(penalties)},
              {"criteria", std::move(criteria)},
              {"folds", cfg.folds},
              {"grid", json{{"count", cfg.grid_count}, {"ratio", cfg.grid_ratio}}},
              {"base_seed", cfg.base_seed},
              {"parallelism", cfg.parallelism}};
}

inline json json_of(const ExperimentReport& report) {
  json aggregates = json::array();
  for (const ComboAggregate& agg : report.aggregates)
    aggregates.push_back(json{{"penalty", penalty_name(agg.penalty)},
                              {"criterion", criterion_name(agg.criterion)},
                              {"reps_used", agg.reps_used},
                              {"failures", agg.failures},
                              {"spec", json_of(agg.spec)},
                              {"sens", json_of(agg.sens)},
                              {"mcc", json_of(agg.mcc)}});
  json reps = json::array();
  for (const RepRecord& rec : report.reps) {
    json cells = json::array();
    for (const CellResult& cell : rec.cells) {
      json c{{"penalty", penalty_name(cell.penalty)},
             {"criterion", criterion_name(cell.criterion)},
             {"ok", cell.ok}};
      if (cell.ok) {
        c["lambda"] = cell.lambda;
        c["edge_count"] = cell.edge_count;
        c["counts"] = json_of(cell.counts);
        c["spec"] = cell.spec;
        c["sens"] = cell.sens;
        c["mcc"] = cell.mcc_value;
      } else {
        c["error"] = cell.error;
      }
      cells.push_back(std::move(c));
    }
    reps.push_back(json{{"rep", rec.rep}, {"seed", rec.seed}, {"cells", std::move(cells)}});
  }
  return json{{"config", json_of(report.config)},
              {"truth",
               json{{"p", report.truth.C0.dim()},
                    {"edges", json_of(report.truth.edges)},
                    {"edge_count", report.truth.edges.size()}}},
              {"aggregates", std::move(aggregates)},
              {"reps", std::move(reps)},
              {"dispersion_note", report.dispersion_note},
              {"wall_seconds", report.wall_seconds}};
}

inline json json_of(const ReferenceCell& ref) {
  return json{{"spec", json{{"mean", ref.spec_mean}, {"sd", ref.spec_sd}}},
              {"sens", json{{"mean", ref.sens_mean}, {"sd", ref.sens_sd}}},
              {"mcc", json{{"mean", ref.mcc_mean}, {"sd", ref.mcc_sd}}}};
}

inline json json_of(const TableReplication& table) {
  json scenarios = json::array();
  for (const ScenarioResult& sc : table.scenarios) {
    json cells = json::array();
    for (std::size_t i = 0; i < sc.report.aggregates.size(); ++i) {
      const ComboAggregate& agg = sc.report.aggregates[i];
      json cell{{"penalty", penalty_name(agg.penalty)},
                {"criterion", criterion_name(agg.criterion)},
                {"observed",
                 json{{"spec", json_of(agg.spec)},
                      {"sens", json_of(agg.sens)},
                      {"mcc", json_of(agg.mcc)},
                      {"reps_used", agg.reps_used},
                      {"failures", agg.failures}}}};
      if (i < sc.reference.size() && sc.reference[i]) cell["reference"] = json_of(*sc.reference[i]);
      cells.push_back(std::move(cell));
    }
    scenarios.push_back(json{{"p", sc.p},
                             {"n", sc.n},
                             {"cells", std::move(cells)},
                             {"report", json_of(sc.report)}});
  }
  return json{{"table", table.table},
              {"scale", scale_name(table.scale)},
              {"reps", table.reps},
              {"base_seed", table.base_seed},
              {"scenarios", std::move(scenarios)}};
}

/// The uniform output document: {version, config, result}.
inline json output_document(json config, json result) {
  return json{{"version", kVersion}, {"config", std::move(config)},
              {"result", std::move(result)}};
}

/// Drop every occurrence of a key anywhere in the document (used to ignore
/// volatile fields such as wall_seconds when comparing outputs).
inline void remove_key_recursive(json& j, const std::string& key) {
  if (j.is_object()) {
    j.erase(key);
    for (auto& [k, v] : j.items()) remove_key_recursive(v, key);
  } else if (j.is_array()) {
    for (auto& v : j) remove_key_recursive(v, key);
  }
}

/// Serialize to `path`, or to stdout when `path` is empty. Reals keep full
/// round-trip precision.
inline void write_output(const json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  out << text;
  if (!out) throw DataError("failed writing output file: " + path);
}

}  // namespace covsel
