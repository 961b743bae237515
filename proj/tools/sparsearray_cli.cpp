// Command-line front end: design reports, uDOF/CL curves, RMSE sweeps and
// MUSIC spectrum dumps.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsearray/coarray.hpp"
#include "sparsearray/config.hpp"
#include "sparsearray/coupling.hpp"
#include "sparsearray/estimation.hpp"
#include "sparsearray/geometry.hpp"
#include "sparsearray/harness.hpp"
#include "sparsearray/signal.hpp"

namespace sa = sparsearray;

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

/// Writes `text` to `path`, or stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse linear array design and SS-MUSIC DOA benchmarking"};
  app.require_subcommand(1);

  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Output path (default: stdout)");
    cmd->add_option("--seed", seed, "Master RNG seed");
    cmd->add_option("--trials", trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  };

  // design
  auto* design = app.add_subcommand("design", "Geometry, coarray and closed-form report for one array");
  int design_k = 0;
  std::string design_kind = "emisc";
  std::vector<sa::Position> design_positions;
  std::string coarray_csv;
  std::string design_format = "json";
  design->add_option("--K", design_k, "Number of elements");
  design->add_option("--kind", design_kind, "emisc | ula | nested | coprime | custom");
  design->add_option("--positions", design_positions, "Explicit positions for --kind custom")->delimiter(',');
  design->add_option("--coarray-csv", coarray_csv, "Also write lag,weight rows to this path");
  design->add_option("--format", design_format, "json | line")->check(CLI::IsMember({"json", "line"}));
  add_common(design);

  // curves
  auto* curves = app.add_subcommand("curves", "uDOF and coupling leakage versus K");
  int k_min = 10;
  int k_max = 60;
  std::vector<std::string> kinds{"emisc", "nested", "coprime", "ula"};
  curves->add_option("--K-min", k_min, "Smallest K");
  curves->add_option("--K-max", k_max, "Largest K");
  curves->add_option("--kinds", kinds, "Array kinds")->delimiter(',');
  add_common(curves);

  // rmse
  auto* rmse_cmd = app.add_subcommand("rmse", "Monte Carlo RMSE sweep from a config file");
  std::string config_path;
  rmse_cmd->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  add_common(rmse_cmd);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Dump the SS-MUSIC pseudo-spectrum of one trial");
  std::string array_spec = "emisc:10";
  std::vector<double> bearings{-30.0, 30.0};
  double snr_db = 10.0;
  int snapshots = 1000;
  double u1_mag = 0.0;
  double u1_arg = 1.0471975511965976;
  int grid_points = 18001;
  spectrum->add_option("--array", array_spec, "Array spec, e.g. emisc:10 or nested:4:4");
  spectrum->add_option("--bearings", bearings, "Source bearings in degrees")->delimiter(',');
  spectrum->add_option("--snr", snr_db, "SNR in dB");
  spectrum->add_option("--snapshots", snapshots, "Snapshots T");
  spectrum->add_option("--u1-mag", u1_mag, "Coupling |u1| (0 disables coupling)");
  spectrum->add_option("--u1-arg", u1_arg, "Coupling arg(u1) in radians");
  spectrum->add_option("--grid-points", grid_points, "MUSIC grid size");
  add_common(spectrum);

  CLI11_PARSE(app, argc, argv);

  try {
    if (design->parsed()) {
      const auto kind = sa::parse_kind(design_kind);
      const auto geometry = kind == sa::ArrayKind::custom
                                ? sa::custom_positions(design_positions)
                                : sa::from_kind_and_count(kind, design_k);
      const auto report = sa::run_design_report(geometry);
      if (!coarray_csv.empty()) {
        std::ostringstream csv;
        sa::write_coarray_csv(csv, sa::difference_coarray(geometry));
        emit(coarray_csv, csv.str());
      }
      emit(out_path, design_format == "line" ? sa::to_line(geometry) + "\n"
                                             : sa::to_json(report).dump(2) + "\n");
      return 0;
    }

    if (curves->parsed()) {
      std::ostringstream csv;
      sa::write_curves_csv(csv, sa::run_curves(k_min, k_max, kinds));
      emit(out_path, csv.str());
      return 0;
    }

    if (rmse_cmd->parsed()) {
      auto config = sa::load_config(config_path);
      if (seed) config.seed = *seed;
      if (trials) config.trials = *trials;
      if (threads) config.threads = *threads;
      if (!out_path.empty()) config.output = out_path;
      const auto rows = sa::run_rmse_sweep(config);
      std::ostringstream csv;
      sa::write_rmse_csv(csv, rows, "sparsearray rmse " + std::string(sa::to_string(config.experiment)) +
                                        " generated " + timestamp());
      emit(config.output, csv.str());
      return 0;
    }

    if (spectrum->parsed()) {
      const auto geometry = sa::from_spec(array_spec);
      std::optional<sa::CouplingModel> coupling;
      if (u1_mag > 0.0) coupling = sa::CouplingModel::from_polar(u1_mag, u1_arg);
      const auto trial = sa::trial_seed(seed.value_or(1), 0);
      sa::SourceScenario scenario{bearings, {}, snr_db, snapshots, trial};
      const auto covariance = sa::sample_covariance(sa::simulate_snapshots(geometry, scenario, coupling));
      sa::MusicConfig music;
      music.grid_points = grid_points;
      music.num_sources = static_cast<int>(bearings.size());
      music.keep_spectrum = true;
      auto result = sa::estimate_from_covariance(covariance, geometry, music);
      result.trial_seed = trial;
      std::ostringstream csv;
      sa::write_spectrum_csv(csv, result);
      emit(out_path, csv.str());
      std::cerr << "estimates_deg:";
      for (double e : result.estimates_deg) std::cerr << ' ' << sa::format_float(e);
      std::cerr << (result.under_detected ? " (under-detected)\n" : "\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
