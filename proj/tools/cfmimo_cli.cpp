// Command-line front end: simulate, sweep, ingest, solve.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cfmimo/config.hpp"
#include "cfmimo/experiment.hpp"
#include "cfmimo/io.hpp"

namespace fs = std::filesystem;
using namespace cfmimo;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIngest = 3;
constexpr int kExitAllInfeasible = 4;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

int cmd_simulate(const std::string& config_path, const fs::path& out_dir) {
  const ExperimentSpec spec = load_experiment(config_path);
  const ExperimentResult result = run_experiment(spec);
  fs::create_directories(out_dir);

  auto records_out = open_output(out_dir / "records.csv");
  write_records_csv(records_out, result.records);

  for (const auto& series : group_series(spec, result.records)) {
    if (series.se.empty()) {
      std::cerr << "warning: no feasible records for " << series.label << ", CDF skipped\n";
      continue;
    }
    auto se_out = open_output(out_dir / ("cdf_se_" + series.label + ".csv"));
    write_cdf_csv(se_out, empirical_cdf(series.se));
    auto ee_out = open_output(out_dir / ("cdf_ee_" + series.label + ".csv"));
    write_cdf_csv(ee_out, empirical_cdf(series.ee));
  }

  if (result.infeasible_records > 0) {
    std::cerr << "warning: " << result.infeasible_records << " of " << result.records.size()
              << " records infeasible (flagged, excluded from CDFs)\n";
  }
  if (result.infeasible_records == static_cast<int>(result.records.size())) {
    std::cerr << "error: every record is infeasible\n";
    return kExitAllInfeasible;
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const fs::path& out_dir) {
  const ExperimentSpec spec = load_experiment(config_path);
  const SweepResult result = sweep_power(spec);
  fs::create_directories(out_dir);
  auto out = open_output(out_dir / "sweep.csv");
  write_sweep_csv(out, result.rows);
  if (result.infeasible_records > 0) {
    std::cerr << "warning: " << result.infeasible_records << " of " << result.total_records
              << " records infeasible (excluded from medians)\n";
  }
  if (result.rows.empty()) {
    std::cerr << "error: every record is infeasible\n";
    return kExitAllInfeasible;
  }
  return 0;
}

int cmd_ingest(const std::string& tensor_path, const fs::path& out_path) {
  const MeasurementTensor t = read_measurement_csv(tensor_path);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  auto out = open_output(out_path);
  write_beta_csv(out, beta_from_measurements(t));
  return 0;
}

void print_vector(std::ostream& os, const char* name, const std::vector<double>& v) {
  os << "  " << name << ":";
  for (double x : v) os << ' ' << format_number(x);
  os << '\n';
}

int cmd_solve(const std::string& config_path, int index) {
  const ExperimentSpec spec = load_experiment(config_path);
  if (index < 0) throw ConfigError("--realization must be non-negative");
  const ChannelSource source(spec);
  const RealizationContext ctx =
      prepare_realization(spec, spec.cfg, source.realization(index), index);

  std::cout << "realization " << index << " rho " << format_number(ctx.rho) << '\n';
  bool any = false;
  for (const auto& lr : solve_all(spec, spec.cfg, ctx)) {
    std::cout << to_string(lr.algorithm);
    if (lr.target_se) std::cout << " target_se " << format_number(*lr.target_se);
    std::cout << '\n';
    if (!lr.result) {
      std::cout << "  infeasible: " << lr.error << '\n';
      continue;
    }
    any = true;
    const TpcResult& r = *lr.result;
    const PerUeMetrics m = evaluate(ctx.profile, r.allocation.q, ctx.rho, spec.cfg);
    print_vector(std::cout, "q", r.allocation.q);
    if (r.algorithm != Algorithm::kMaxPower) {
      std::cout << "  objective: " << format_number(r.objective) << '\n';
    }
    if (r.nu_star) std::cout << "  nu_star: " << format_number(*r.nu_star) << '\n';
    if (r.nu_opt) std::cout << "  nu_opt: " << format_number(*r.nu_opt) << '\n';
    std::cout << "  iterations: " << r.allocation.iterations << '\n';
    print_vector(std::cout, "se_bits_s_hz", m.se);
    print_vector(std::cout, "ee_bits_j", m.ee);
  }
  return any ? 0 : kExitAllInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO uplink power-control simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string tensor_path;
  std::string beta_path;
  int realization = 0;

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run: records.csv and CDF CSVs");
  simulate->add_option("config", config_path, "Config file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Power-parameter sweep: sweep.csv of medians");
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* ingest = app.add_subcommand("ingest", "Average large-scale fading of a measurement tensor");
  ingest->add_option("tensor", tensor_path, "Tensor CSV (instance,ap,ue,re,im,valid)")->required();
  ingest->add_option("--out", beta_path, "Beta CSV to write")->required();

  auto* solve = app.add_subcommand("solve", "Solve every algorithm on one realization");
  solve->add_option("config", config_path, "Config file")->required();
  solve->add_option("--realization", realization, "Realization index")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, out_dir);
    if (*sweep) return cmd_sweep(config_path, out_dir);
    if (*ingest) return cmd_ingest(tensor_path, beta_path);
    if (*solve) return cmd_solve(config_path, realization);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IngestError& e) {
    std::cerr << "ingest error: " << e.what() << '\n';
    return kExitIngest;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
