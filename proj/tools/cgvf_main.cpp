// Command-line front end: run scenario files, validate them, run oracle checks.
//
// Exit codes: 0 success, 1 run finished but tolerances unmet, 2 invalid
// scenario or usage, 3 run aborted (degenerate field, collision, divergence).

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>

#include "cgvf/error.hpp"
#include "cgvf/oracles.hpp"
#include "cgvf/report.hpp"
#include "cgvf/scenario_file.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kTolerance = 1, kInvalid = 2, kAborted = 3 };

struct RunArgs {
  std::vector<std::string> files;
  std::string out = "out";
  std::optional<double> dt, t_end;
  std::optional<std::uint64_t> seed;
  std::optional<int> record_stride;
  bool no_plots = false;
  bool no_csv = false;
  bool quiet = false;
};

void status_line(json j) { std::cout << j.dump() << std::endl; }

json invalid(const std::string& file, const std::vector<std::string>& violations) {
  return {{"file", file}, {"status", "invalid"}, {"violations", violations}};
}

int run_one(const std::string& file, const RunArgs& args) {
  cgvf::ScenarioDocument doc;
  try {
    doc = cgvf::load_scenario_file(file);
    auto& sc = doc.scenario;
    if (args.dt) sc.dt = *args.dt;
    if (args.t_end) sc.t_end = *args.t_end;
    if (args.seed) sc.seed = *args.seed;
    if (args.record_stride) sc.record_stride = *args.record_stride;
    sc.validate();
  } catch (const cgvf::ScenarioError& e) {
    status_line(invalid(file, e.violations()));
    return kInvalid;
  }
  const cgvf::Scenario& sc = doc.scenario;
  const fs::path dir = fs::path(args.out) / sc.name;
  fs::create_directories(dir);
  {
    std::ofstream resolved(dir / "scenario.json");
    resolved << cgvf::serialize_scenario(sc, doc.outputs).dump(2) << '\n';
  }

  std::optional<cgvf::CsvWriter> csv;
  if (doc.outputs.csv && !args.no_csv) csv.emplace(dir / "trace.csv", sc);
  cgvf::RunOptions opts;
  opts.on_record = [&](const cgvf::TraceRecord& r) {
    if (csv) csv->write(r);
  };
  const long total = sc.n_steps();
  const long tick = std::max<long>(1, total / 10);
  if (!args.quiet)
    opts.on_step = [&](const cgvf::Simulator& sim) {
      if (sim.step_index() % tick == 0)
        std::cerr << sc.name << ": t = " << sim.time() << " / " << sc.t_end << '\n';
    };

  cgvf::Trace trace;
  std::string abort_reason;
  try {
    cgvf::run_into(sc, trace, opts);
  } catch (const cgvf::PlanarDegeneracy& e) {
    abort_reason = std::string("planar_degeneracy: ") + e.what();
  } catch (const cgvf::CollisionState& e) {
    abort_reason = std::string("collision: ") + e.what();
  } catch (const cgvf::DivergedState& e) {
    abort_reason = std::string("diverged: ") + e.what();
  }
  if (csv) csv->flush();

  const cgvf::RunSummary summary = cgvf::summarize(sc, trace, abort_reason);
  json sj = cgvf::to_json(summary);
  if (doc.outputs.plots && !args.no_plots) {
    json plots = json::array();
    for (const auto& p : cgvf::write_plots(sc, trace, dir)) plots.push_back(p.filename().string());
    sj["plots"] = plots;
  }
  {
    std::ofstream out(dir / "summary.json");
    out << sj.dump(2) << '\n';
  }
  sj["file"] = file;
  sj["out"] = dir.string();
  status_line(sj);
  if (!abort_reason.empty()) return kAborted;
  return summary.tolerances_met ? kOk : kTolerance;
}

int validate_one(const std::string& file, bool print_explicit) {
  try {
    const auto doc = cgvf::load_scenario_file(file);
    if (print_explicit) std::cout << cgvf::serialize_scenario(doc.scenario, doc.outputs).dump(2) << '\n';
    status_line({{"file", file},
                 {"status", "valid"},
                 {"robots", doc.scenario.n_robots()},
                 {"steps", doc.scenario.n_steps()}});
    return kOk;
  } catch (const cgvf::ScenarioError& e) {
    status_line(invalid(file, e.violations()));
    return kInvalid;
  }
}

int oracle(const std::string& name) {
  if (name == "list") {
    for (const auto& n : cgvf::oracle::check_names()) std::cout << n << '\n';
    return kOk;
  }
  std::vector<std::string> names =
      name == "all" ? cgvf::oracle::check_names() : std::vector<std::string>{name};
  bool ok = true;
  for (const auto& n : names) {
    try {
      const bool pass = cgvf::oracle::run_check(n, std::cout);
      std::cout << (pass ? "PASS " : "FAIL ") << n << '\n';
      ok = ok && pass;
    } catch (const cgvf::Error& e) {
      std::cerr << e.what() << '\n';
      return kInvalid;
    }
  }
  return ok ? kOk : kTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated guiding vector field simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate one or more scenario files");
  run->add_option("scenario", run_args.files, "Scenario JSON files")->required()->check(CLI::ExistingFile);
  run->add_option("--out", run_args.out, "Output directory (one subdirectory per scenario)");
  run->add_option("--dt", run_args.dt, "Override the time step")->check(CLI::PositiveNumber);
  run->add_option("--t-end", run_args.t_end, "Override the horizon")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_args.seed, "Override the random seed");
  run->add_option("--record-stride", run_args.record_stride, "Record every k-th step")
      ->check(CLI::PositiveNumber);
  run->add_flag("--no-plots", run_args.no_plots, "Skip SVG plots");
  run->add_flag("--no-csv", run_args.no_csv, "Skip the CSV trace");
  run->add_flag("-q,--quiet", run_args.quiet, "No progress output");

  std::vector<std::string> validate_files;
  bool print_explicit = false;
  auto* validate = app.add_subcommand("validate", "Check scenario files without running them");
  validate->add_option("scenario", validate_files, "Scenario JSON files")->required();
  validate->add_flag("--explicit", print_explicit, "Print the resolved explicit form");

  std::string oracle_name = "all";
  auto* orc = app.add_subcommand("oracle", "Run independent reference checks");
  orc->add_option("name", oracle_name, "Check name, 'all' or 'list'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  int worst = kOk;
  if (*run) {
    for (const auto& f : run_args.files) worst = std::max(worst, run_one(f, run_args));
  } else if (*validate) {
    for (const auto& f : validate_files) worst = std::max(worst, validate_one(f, print_explicit));
  } else if (*orc) {
    worst = oracle(oracle_name);
  }
  return worst;
}
