// covsel: sparse inverse-covariance estimation by penalized likelihood.
//
// Subcommands: estimate (one fit at a fixed lambda), select (BIC or
// cross-validated tuning over a lambda grid), simulate (seeded
// edge-recovery study against a known model), replicate (the bundled
// three-table study). Outputs a JSON document {version, config, result}.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covsel/covsel.hpp"

namespace {

struct EstimateArgs {
  std::string input;
  std::string penalty = "lasso";
  double lambda = 0.0;
  double a = covsel::kDefaultScadA;
  double gamma = covsel::kDefaultAdaptiveGamma;
  bool center = false;
  bool header = false;
  std::string out;
};

struct SelectArgs {
  std::string input;
  std::string penalty = "lasso";
  std::string criterion = "bic";
  double a = covsel::kDefaultScadA;
  double gamma = covsel::kDefaultAdaptiveGamma;
  int folds = 5;
  int grid_count = 50;
  double grid_ratio = 0.01;
  std::uint64_t seed = 0;
  bool header = false;
  std::string out;
};

struct SimulateArgs {
  std::string model = "ar1";
  int p = 0;
  int n = 0;
  int reps = 0;
  int neighbors = 3;
  std::vector<std::string> penalties;
  std::vector<std::string> criteria;
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::string out;
};

struct ReplicateArgs {
  int table = 1;
  std::string scale = "desk";
  int reps = 20;
  std::uint64_t seed = 0;
  int parallelism = 1;
  std::string out;
};

void run_estimate(const EstimateArgs& args) {
  const covsel::DataMatrix X = covsel::load_csv(args.input, args.header);
  const covsel::SymmetricMatrix A = covsel::sample_covariance(X, args.center);
  const covsel::PenaltyKind kind = covsel::parse_penalty(args.penalty);

  covsel::GlassoSolution sol;
  switch (kind) {
    case covsel::PenaltyKind::Lasso:
      sol = covsel::fit_lasso(A, args.lambda);
      break;
    case covsel::PenaltyKind::Scad:
      sol = covsel::fit_scad(A, args.lambda, args.a);
      break;
    case covsel::PenaltyKind::AdaptiveLasso: {
      const covsel::SymmetricMatrix pilot = covsel::initial_estimate(A, X.rows());
      sol = covsel::fit_adaptive(A, args.lambda, args.gamma, pilot);
      break;
    }
  }

  covsel::json config{{"command", "estimate"},
                      {"input", args.input},
                      {"header", args.header},
                      {"penalty", covsel::penalty_name(kind)},
                      {"lambda", args.lambda}};
  if (kind == covsel::PenaltyKind::Scad) config["a"] = args.a;
  if (kind == covsel::PenaltyKind::AdaptiveLasso) config["gamma"] = args.gamma;
  config["center"] = args.center;
  config["n"] = X.rows();
  config["p"] = X.cols();
  covsel::write_output(
      covsel::output_document(std::move(config), covsel::json{{"fit", covsel::json_of(sol)}}),
      args.out);
}

void run_select(const SelectArgs& args) {
  const covsel::DataMatrix X = covsel::load_csv(args.input, args.header);
  const covsel::SymmetricMatrix A = covsel::sample_covariance(X, /*center=*/true);
  const covsel::LambdaGrid grid = covsel::default_grid(A, args.grid_count, args.grid_ratio);
  covsel::PenaltyConfig penalty;
  penalty.kind = covsel::parse_penalty(args.penalty);
  penalty.scad_a = args.a;
  penalty.adaptive_gamma = args.gamma;
  const covsel::Criterion criterion = covsel::parse_criterion(args.criterion);

  const covsel::SelectionResult sel =
      covsel::select(X, penalty, criterion, grid, args.folds, args.seed);

  covsel::json config{{"command", "select"},
                      {"input", args.input},
                      {"header", args.header},
                      {"penalty", covsel::penalty_name(penalty.kind)},
                      {"criterion", covsel::criterion_name(criterion)}};
  if (penalty.kind == covsel::PenaltyKind::Scad) config["a"] = args.a;
  if (penalty.kind == covsel::PenaltyKind::AdaptiveLasso) config["gamma"] = args.gamma;
  if (criterion == covsel::Criterion::Cv) {
    config["folds"] = args.folds;
    config["seed"] = args.seed;
  }
  config["grid"] = covsel::json{{"count", args.grid_count}, {"ratio", args.grid_ratio}};
  config["n"] = X.rows();
  config["p"] = X.cols();
  covsel::write_output(covsel::output_document(
                           std::move(config),
                           covsel::json{{"selection", covsel::json_of(sel)}}),
                       args.out);
}

void run_simulate(const SimulateArgs& args) {
  covsel::ExperimentConfig cfg;
  cfg.model.kind = covsel::parse_graph_kind(args.model);
  cfg.model.p = args.p;
  cfg.model.neighbors = args.neighbors;
  cfg.model.seed = args.seed;
  cfg.n = args.n;
  cfg.reps = args.reps;
  for (const std::string& name : args.penalties)
    cfg.penalties.push_back(covsel::parse_penalty(name));
  for (const std::string& name : args.criteria)
    cfg.criteria.push_back(covsel::parse_criterion(name));
  cfg.base_seed = args.seed;
  cfg.parallelism = args.parallelism;

  const covsel::ExperimentReport report = covsel::run_experiment(cfg);
  covsel::json config{{"command", "simulate"}};
  config.update(covsel::json_of(cfg));
  covsel::write_output(
      covsel::output_document(std::move(config), covsel::json_of(report)), args.out);
}

void run_replicate(const ReplicateArgs& args) {
  const covsel::Scale scale = covsel::parse_scale(args.scale);
  const covsel::TableReplication table =
      covsel::replicate_table(args.table, args.reps, scale, args.seed, args.parallelism);
  covsel::json config{{"command", "replicate"}, {"table", args.table},
                      {"scale", covsel::scale_name(scale)}, {"reps", args.reps},
                      {"seed", args.seed},       {"parallelism", args.parallelism}};
  covsel::write_output(covsel::output_document(std::move(config), covsel::json_of(table)),
                       args.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse inverse-covariance estimation by penalized likelihood"};
  app.set_version_flag("--version", covsel::kVersion);
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand("estimate", "One penalized fit at a fixed lambda");
  estimate->add_option("--input", est.input, "CSV data file, n rows by p columns")->required();
  estimate->add_option("--penalty", est.penalty, "lasso, scad, or adaptive")->required();
  estimate->add_option("--lambda", est.lambda, "penalty level")->required();
  estimate->add_option("--a", est.a, "SCAD shape parameter (default 3.7)");
  estimate->add_option("--gamma", est.gamma, "adaptive weight exponent (default 0.5)");
  estimate->add_flag("--center", est.center, "subtract column means before the covariance");
  estimate->add_flag("--header", est.header, "skip one header row in the CSV");
  estimate->add_option("--out", est.out, "output JSON path (default stdout)");

  SelectArgs selargs;
  CLI::App* sel = app.add_subcommand("select", "Tune lambda over a grid by BIC or CV");
  sel->add_option("--input", selargs.input, "CSV data file, n rows by p columns")->required();
  sel->add_option("--penalty", selargs.penalty, "lasso, scad, or adaptive")->required();
  sel->add_option("--criterion", selargs.criterion, "bic or cv")->required();
  sel->add_option("--a", selargs.a, "SCAD shape parameter (default 3.7)");
  sel->add_option("--gamma", selargs.gamma, "adaptive weight exponent (default 0.5)");
  sel->add_option("--folds", selargs.folds, "CV folds (default 5)");
  sel->add_option("--grid-count", selargs.grid_count, "lambda grid size (default 50)");
  sel->add_option("--grid-ratio", selargs.grid_ratio, "grid min/max ratio (default 0.01)");
  sel->add_option("--seed", selargs.seed, "CV fold shuffle seed (default 0)");
  sel->add_flag("--header", selargs.header, "skip one header row in the CSV");
  sel->add_option("--out", selargs.out, "output JSON path (default stdout)");

  SimulateArgs sim;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Seeded edge-recovery study against a known model");
  simulate->add_option("--model", sim.model, "ar1, ar2, or geo")->required();
  simulate->add_option("--p", sim.p, "dimension")->required();
  simulate->add_option("--n", sim.n, "sample size per replication")->required();
  simulate->add_option("--reps", sim.reps, "number of replications")->required();
  simulate->add_option("--neighbors", sim.neighbors, "nearest neighbors for geo (default 3)");
  simulate->add_option("--penalties", sim.penalties, "comma-separated: lasso,scad,adaptive")
      ->required()
      ->delimiter(',');
  simulate->add_option("--criteria", sim.criteria, "comma-separated: bic,cv")
      ->required()
      ->delimiter(',');
  simulate->add_option("--seed", sim.seed, "base seed (default 0)");
  simulate->add_option("--parallelism", sim.parallelism, "worker threads (default 1)");
  simulate->add_option("--out", sim.out, "output JSON path (default stdout)");

  ReplicateArgs rep;
  CLI::App* replicate = app.add_subcommand("replicate", "Run one bundled three-scenario table");
  replicate->add_option("--table", rep.table, "1, 2, or 3")->required();
  replicate->add_option("--scale", rep.scale, "full or desk (default desk)");
  replicate->add_option("--reps", rep.reps, "replications per scenario (default 20)");
  replicate->add_option("--seed", rep.seed, "base seed (default 0)");
  replicate->add_option("--parallelism", rep.parallelism, "worker threads (default 1)");
  replicate->add_option("--out", rep.out, "output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (estimate->parsed())
      run_estimate(est);
    else if (sel->parsed())
      run_select(selargs);
    else if (simulate->parsed())
      run_simulate(sim);
    else if (replicate->parsed())
      run_replicate(rep);
    return 0;
  } catch (const covsel::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
