// Black-box checks of the command-line interface: smoke contracts, the
// large-sample consistency run, report completeness, and exit codes.
//
// Usage: covsel_cli_checks <path-to-cli-binary> <work-dir>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "covsel/covsel.hpp"

namespace {

namespace fs = std::filesystem;

int g_failures = 0;

void expect(bool ok, const std::string& what) {
  std::cout << (ok ? "[ok] " : "[FAILED] ") << what << std::endl;
  if (!ok) ++g_failures;
}

int run(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

covsel::json load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing output file: " + path.string());
  return covsel::json::parse(in);
}

void write_csv(const fs::path& path, const covsel::DataMatrix& X, bool header) {
  std::ofstream out(path);
  out.precision(17);
  if (header) {
    for (int j = 0; j < X.cols(); ++j) out << (j ? ",v" : "v") << j;
    out << "\n";
  }
  for (int i = 0; i < X.rows(); ++i) {
    for (int j = 0; j < X.cols(); ++j) out << (j ? "," : "") << X(i, j);
    out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: covsel_cli_checks <cli-binary> <work-dir>\n";
    return 2;
  }
  const std::string cli = std::string("\"") + argv[1] + "\"";
  const fs::path work = argv[2];
  fs::create_directories(work);

  covsel::GraphModel small;
  small.kind = covsel::GraphKind::Ar1;
  small.p = 3;
  const auto small_csv = work / "small.csv";
  write_csv(small_csv, covsel::sample_mvn(covsel::true_precision(small), 20, 2), true);

  // Estimation smoke contract: JSON with the precision estimate, the edge
  // list, and the objective value.
  {
    const auto out = work / "estimate.json";
    const int rc = run(cli + " estimate --input " + small_csv.string() +
                       " --penalty lasso --lambda 0.2 --center --header --out " +
                       out.string());
    expect(rc == 0, "estimate exits 0 on a valid CSV");
    const auto doc = load(out);
    expect(doc["version"] == covsel::kVersion, "estimate reports the library version");
    expect(doc["config"]["command"] == "estimate", "estimate echoes its command");
    expect(doc["config"]["lambda"] == 0.2, "estimate echoes lambda");
    expect(doc["result"]["fit"]["precision"]["dimension"] == 3, "estimate returns the precision");
    expect(doc["result"]["fit"]["edges"].is_array(), "estimate returns the edge list");
    expect(doc["result"]["fit"]["objective"].is_number(), "estimate returns the objective");
  }

  // The adaptive path builds its pilot internally.
  {
    const int rc = run(cli + " estimate --input " + small_csv.string() +
                       " --penalty adaptive --lambda 0.1 --center --header --out " +
                       (work / "estimate_adaptive.json").string());
    expect(rc == 0, "estimate supports the adaptive penalty");
  }

  // Large-sample consistency: the selected edge set equals the true band.
  {
    covsel::GraphModel model;
    model.kind = covsel::GraphKind::Ar1;
    model.p = 10;
    const auto truth = covsel::true_precision(model);
    const auto big_csv = work / "big.csv";
    write_csv(big_csv, covsel::sample_mvn(truth, 10000, 1), false);
    const auto out = work / "select.json";
    const int rc = run(cli + " select --input " + big_csv.string() +
                       " --penalty scad --criterion bic --out " + out.string());
    expect(rc == 0, "select exits 0 on the generated sample");
    const auto doc = load(out);
    covsel::json expected = covsel::json::array();
    for (const auto& [i, j] : truth.edges)
      expected.push_back(covsel::json::array({i + 1, j + 1}));
    expect(doc["result"]["selection"]["best_fit"]["edges"] == expected,
           "select recovers the true band at n=10000");
    expect(doc["result"]["selection"]["path"].is_array() &&
               !doc["result"]["selection"]["path"].empty(),
           "select reports the whole tuning path");
  }

  // Replication completeness: every scenario cell carries observed metrics.
  {
    const auto out = work / "replicate.json";
    const int rc =
        run(cli + " replicate --table 1 --scale desk --reps 20 --out " + out.string());
    expect(rc == 0, "replicate exits 0 at desk scale");
    const auto doc = load(out);
    const auto& scenarios = doc["result"]["scenarios"];
    expect(scenarios.size() == 3, "replicate covers three scenarios");
    bool cells_ok = true;
    for (const auto& scenario : scenarios) {
      if (scenario["cells"].size() != 6) cells_ok = false;
      for (const auto& cell : scenario["cells"]) {
        const auto& obs = cell["observed"];
        if (!obs["spec"]["mean"].is_number() || !obs["sens"]["mean"].is_number() ||
            !obs["mcc"]["mean"].is_number())
          cells_ok = false;
        if (obs["reps_used"].get<int>() + obs["failures"].get<int>() != 20) cells_ok = false;
      }
    }
    expect(cells_ok, "replicate populates all 18 cells with observed metrics");
  }

  // Simulation smoke over the geometric model with penalty/criterion lists.
  {
    const auto out = work / "simulate.json";
    const int rc = run(cli +
                       " simulate --model geo --p 12 --n 60 --reps 3"
                       " --penalties lasso,scad --criteria bic --seed 5 --out " +
                       out.string());
    expect(rc == 0, "simulate exits 0 on the geometric model");
    const auto doc = load(out);
    expect(doc["result"]["aggregates"].size() == 2, "simulate aggregates every combination");
    expect(doc["result"]["reps"].size() == 3, "simulate records every replication");
  }

  // Exit codes: 0 success, 2 usage, 3 data, 4 numerical failure.
  {
    expect(run(cli + " --version") == 0, "--version exits 0");
    expect(run(cli + " estimate --no-such-flag") == 2, "unknown flags exit 2");
    expect(run(cli + " estimate --input " + (work / "absent.csv").string() +
               " --penalty lasso --lambda 0.1") == 3,
           "missing input files exit 3");
    expect(run(cli + " estimate --input " + small_csv.string() +
               " --penalty lasso --lambda -0.5 --header") == 2,
           "invalid parameter values exit 2");

    const auto bad_csv = work / "bad.csv";
    std::ofstream(bad_csv) << "1,2\n3,oops\n";
    expect(run(cli + " estimate --input " + bad_csv.string() +
               " --penalty lasso --lambda 0.1") == 3,
           "malformed numbers exit 3");

    const auto singular_csv = work / "singular.csv";
    std::ofstream(singular_csv) << "1,1\n2,2\n-1,-1\n0.5,0.5\n";
    expect(run(cli + " estimate --input " + singular_csv.string() +
               " --penalty lasso --lambda 0") == 4,
           "singular unpenalized problems exit 4");
  }

  if (g_failures == 0) {
    std::cout << "all cli checks passed" << std::endl;
    return 0;
  }
  std::cout << g_failures << " cli checks failed" << std::endl;
  return 1;
}
