#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsearray/coarray.hpp"
#include "sparsearray/config.hpp"
#include "sparsearray/coupling.hpp"
#include "sparsearray/estimation.hpp"
#include "sparsearray/geometry.hpp"

namespace sparsearray {

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Results must be written to per-index slots by the caller.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// ---------------------------------------------------------------------------
// design

template <typename T>
struct Checked {
  T bruteforce{};
  std::optional<T> closed_form;  // empty when no closed form applies
  bool match() const { return closed_form && *closed_form == bruteforce; }
};

struct DesignReport {
  ArrayGeometry geometry;
  CoarraySummary coarray;
  Checked<std::int64_t> udof;
  Checked<WeightTriple> weights;
  std::optional<std::int64_t> imisc_udof;
  std::optional<WeightTriple> imisc_weights;
  double coupling_leakage = 0.0;
  std::optional<RangeReport> ranges;  // EMISC only

  /// Set when a closed-form weight triple exists and disagrees with brute force.
  bool weight_mismatch() const { return weights.closed_form && !weights.match(); }
};

DesignReport run_design_report(const ArrayGeometry& geometry,
                               const CouplingModel& coupling = CouplingModel::reference());
DesignReport run_design_report(int element_count, ArrayKind kind);

nlohmann::ordered_json to_json(const DesignReport& report);

// ---------------------------------------------------------------------------
// curves

struct CurveRow {
  std::string kind;
  int element_count = 0;
  std::optional<std::int64_t> udof_bruteforce;
  std::optional<std::int64_t> udof_closed_form;
  std::optional<double> cl;
  std::string note;  // per-row error, empty on success
};

/// Closed-form uDOF where one exists: EMISC, ULA (2K - 1) and two-level
/// nested (2 K2 (K1 + 1) - 1). Empty otherwise.
std::optional<std::int64_t> closed_form_udof(const ArrayGeometry& geometry, int element_count);

std::vector<CurveRow> run_curves(int k_min, int k_max, const std::vector<std::string>& kinds,
                                 const CouplingModel& coupling = CouplingModel::reference());

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows);

// ---------------------------------------------------------------------------
// rmse sweeps

struct RmseRow {
  std::string kind;
  std::string geometry;  // array spec, e.g. emisc:16
  int element_count = 0;
  std::string sweep_param;  // snr_db or u1_mag
  double sweep_value = 0.0;
  double rmse_deg = 0.0;       // under-detections included
  double rmse_excl_deg = 0.0;  // under-detections excluded
  std::size_t underdetect_count = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int sources = 0;
  int snapshots = 0;
  double snr_db = 0.0;
  double u1_mag = 0.0;
  double u1_arg = 0.0;
  int band_limit = 0;
  double phase_decay = 0.0;
  int grid_points = 0;
  std::string note;
};

/// One sweep point: `trials` seeded Monte Carlo runs of the SS-MUSIC pipeline.
/// Trial t uses trial_seed(seed, t), so every array and sweep value sees the
/// same seed set.
struct TrialBatch {
  std::vector<EstimationResult> results;
  std::size_t failures = 0;
};

TrialBatch run_trials(const ArrayGeometry& geometry, const std::vector<double>& bearings,
                      double snr_db, int snapshots, const std::optional<CouplingModel>& coupling,
                      int grid_points, int trials, std::uint64_t master_seed, int threads);

/// Rows ordered by (array, sweep value) as listed in the config.
std::vector<RmseRow> run_rmse_sweep(const ExperimentConfig& config);

/// CSV with a single `#` comment line, a header and one row per sweep point.
/// All floats use 6 significant digits.
void write_rmse_csv(std::ostream& out, const std::vector<RmseRow>& rows,
                    const std::string& comment = {});

/// `%.6g`, with `nan` / `inf` spelled out.
std::string format_float(double value);

}  // namespace sparsearray
