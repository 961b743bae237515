#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sparsearray {

enum class Experiment { design, curves, rmse_vs_snr, rmse_vs_u1 };

std::string_view to_string(Experiment experiment);
Experiment parse_experiment(std::string_view label);

/// Experiment parameters. Loaded from a flat `key = value` file; list values
/// are comma separated, `#` starts a comment. Recognised keys:
///
///   experiment   design | curves | rmse_vs_snr | rmse_vs_u1
///   arrays       array specs, e.g. `emisc:16, nested:8:8, custom:0/1/4/9`
///   kinds, k_min, k_max       curves sweep
///   sources      number of sources N
///   bearings     explicit bearing list in degrees (overrides the uniform rule)
///   bearing_min, bearing_max  uniform placement, endpoints included
///   snapshots    T
///   snr_db       list (rmse_vs_snr sweeps it; rmse_vs_u1 needs one value)
///   u1_mag       list (rmse_vs_u1 sweeps it; rmse_vs_snr needs one value)
///   u1_arg       radians
///   band_limit, phase_decay   coupling law
///   grid_points  MUSIC grid size over [-90, 90]
///   trials, seed, threads, output
struct ExperimentConfig {
  Experiment experiment = Experiment::rmse_vs_snr;
  std::vector<std::string> arrays{"emisc:36"};
  std::vector<std::string> kinds{"emisc", "nested", "coprime", "ula"};
  int k_min = 10;
  int k_max = 60;
  int sources = 48;
  std::vector<double> bearings;  // empty: uniform over [bearing_min, bearing_max]
  double bearing_min = -60.0;
  double bearing_max = 60.0;
  int snapshots = 1000;
  std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  std::vector<double> u1_mag{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  double u1_arg = 1.0471975511965976;  // pi / 3
  int band_limit = 100;
  double phase_decay = 0.39269908169872414;  // pi / 8
  int grid_points = 18001;
  int trials = 500;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  std::string output;

  /// Bearings actually used: the explicit list, or `sources` uniform ones.
  std::vector<double> resolved_bearings() const;
  void validate() const;
};

/// Applies `key = value` lines onto `config`. Throws std::invalid_argument on
/// unknown keys or malformed values, naming the line.
void apply_config_text(ExperimentConfig& config, std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Default parameters for each experiment family: rmse_vs_snr sweeps SNR at
/// |u1| = 0.3, rmse_vs_u1 sweeps |u1| at 0 dB.
ExperimentConfig default_config(Experiment experiment);

}  // namespace sparsearray
