#include "sparsearray/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "sparsearray/signal.hpp"

namespace sparsearray {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::string format_float(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

// ---------------------------------------------------------------------------
// design

DesignReport run_design_report(const ArrayGeometry& geometry, const CouplingModel& coupling) {
  const auto table = difference_coarray(geometry);
  const int k = static_cast<int>(geometry.element_count());
  DesignReport report{geometry, summarize(table), {}, {}, {}, {}, 0.0, {}};
  report.udof.bruteforce = udof(table);
  report.udof.closed_form = closed_form_udof(geometry, k);
  report.weights.bruteforce = first_three_weights(table);
  if (geometry.kind() == ArrayKind::emisc) {
    report.weights.closed_form = closed_form_weights_emisc(k);
    report.imisc_udof = closed_form_udof_imisc(k);
    report.imisc_weights = closed_form_weights_imisc(k);
    report.ranges = verify_consecutive_ranges(k);
  }
  report.coupling_leakage = coupling_leakage(coupling_matrix(geometry, coupling));
  return report;
}

DesignReport run_design_report(int element_count, ArrayKind kind) {
  return run_design_report(from_kind_and_count(kind, element_count));
}

nlohmann::ordered_json to_json(const DesignReport& report) {
  using nlohmann::ordered_json;
  const auto& g = report.geometry;
  ordered_json j;
  j["kind"] = to_string(g.kind());
  j["K"] = g.element_count();
  j["positions"] = std::vector<Position>(g.positions().begin(), g.positions().end());
  j["geometry_line"] = to_line(g);
  j["aperture"] = g.aperture();
  j["consecutive_halfwidth"] = report.coarray.consecutive_halfwidth;

  auto optional_value = [](const auto& v) -> ordered_json {
    if (v) return ordered_json(*v);
    return nullptr;
  };
  j["udof"] = {{"bruteforce", report.udof.bruteforce},
               {"closed_form", optional_value(report.udof.closed_form)},
               {"match", report.udof.match()}};
  j["weights"] = {{"bruteforce", report.weights.bruteforce},
                  {"closed_form", optional_value(report.weights.closed_form)},
                  {"match", report.weights.match()},
                  {"mismatch_flag", report.weight_mismatch()}};
  if (report.imisc_udof) {
    j["imisc_closed_form"] = {{"udof", *report.imisc_udof}, {"weights", *report.imisc_weights}};
  }
  j["holes"] = report.coarray.holes;
  j["hole_count"] = report.coarray.hole_count;
  j["coupling_leakage"] = report.coupling_leakage;
  if (report.ranges) {
    const auto& r = *report.ranges;
    ordered_json ranges = ordered_json::array();
    for (const auto& c : r.ranges) {
      ranges.push_back({{"name", c.name}, {"first", c.range.first}, {"last", c.range.last},
                        {"contained", c.contained}});
    }
    j["consecutive_ranges"] = {{"max_ies", r.max_ies},
                               {"ranges", ranges},
                               {"union", {r.union_range.first, r.union_range.last}},
                               {"union_contiguous", r.union_contiguous},
                               {"union_matches_expected", r.union_matches_expected},
                               {"first_hole", emisc_first_hole(r.element_count)},
                               {"hole_confirmed", r.hole_confirmed},
                               {"passed", r.passed()}};
  } else {
    j["consecutive_ranges"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// curves

std::optional<std::int64_t> closed_form_udof(const ArrayGeometry& geometry, int element_count) {
  switch (geometry.kind()) {
    case ArrayKind::emisc: return closed_form_udof_emisc(element_count);
    case ArrayKind::ula: return 2 * std::int64_t{element_count} - 1;
    case ArrayKind::nested: {
      // The outer ULA spacing is K1 + 1.
      const auto p = geometry.positions();
      if (p.size() < 2) return std::nullopt;
      const std::int64_t inner = p[p.size() - 1] - p[p.size() - 2] - 1;
      const std::int64_t outer = element_count - inner;
      if (inner < 1 || outer < 1 ||
          nested_positions(static_cast<int>(inner), static_cast<int>(outer)) != geometry) {
        return std::nullopt;
      }
      return 2 * outer * (inner + 1) - 1;
    }
    default: return std::nullopt;
  }
}

std::vector<CurveRow> run_curves(int k_min, int k_max, const std::vector<std::string>& kinds,
                                 const CouplingModel& coupling) {
  std::vector<CurveRow> rows;
  for (const auto& label : kinds) {
    for (int k = k_min; k <= k_max; ++k) {
      CurveRow row;
      row.kind = label;
      row.element_count = k;
      try {
        const auto geometry = from_kind_and_count(parse_kind(label), k);
        row.udof_bruteforce = udof(difference_coarray(geometry));
        row.udof_closed_form = closed_form_udof(geometry, k);
        row.cl = coupling_leakage(coupling_matrix(geometry, coupling));
      } catch (const std::exception& e) {
        row.note = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

template <typename T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_float(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "kind,K,udof_bruteforce,udof_closed_form,cl,note\n";
  for (const auto& r : rows) {
    out << csv_field(r.kind) << ',' << r.element_count << ',' << optional_field(r.udof_bruteforce)
        << ',' << optional_field(r.udof_closed_form) << ',' << optional_field(r.cl) << ','
        << csv_field(r.note) << '\n';
  }
}

// ---------------------------------------------------------------------------
// rmse sweeps

TrialBatch run_trials(const ArrayGeometry& geometry, const std::vector<double>& bearings,
                      double snr_db, int snapshots, const std::optional<CouplingModel>& coupling,
                      int grid_points, int trials, std::uint64_t master_seed, int threads) {
  const auto table = difference_coarray(geometry);
  MusicConfig music;
  music.grid_points = grid_points;
  music.num_sources = static_cast<int>(bearings.size());

  TrialBatch batch;
  batch.results.resize(static_cast<std::size_t>(trials));
  std::vector<char> failed(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    auto& result = batch.results[t];
    const auto seed = trial_seed(master_seed, t);
    try {
      SourceScenario scenario{bearings, {}, snr_db, snapshots, seed};
      const auto covariance = sample_covariance(simulate_snapshots(geometry, scenario, coupling));
      const auto pseudo = coarray_pseudo_snapshot(covariance, geometry);
      result = estimate_doas(smoothed_matrix(pseudo, table.consecutive_halfwidth()), music);
    } catch (const std::exception&) {
      result = EstimationResult{};
      result.under_detected = true;
      failed[t] = 1;
    }
    result.trial_seed = seed;
  });
  for (char f : failed) batch.failures += static_cast<std::size_t>(f);
  return batch;
}

std::vector<RmseRow> run_rmse_sweep(const ExperimentConfig& config) {
  if (config.experiment != Experiment::rmse_vs_snr && config.experiment != Experiment::rmse_vs_u1) {
    throw std::invalid_argument("rmse sweep needs experiment rmse_vs_snr or rmse_vs_u1");
  }
  config.validate();
  const bool snr_sweep = config.experiment == Experiment::rmse_vs_snr;
  const auto& sweep = snr_sweep ? config.snr_db : config.u1_mag;
  const auto bearings = config.resolved_bearings();

  std::vector<RmseRow> rows;
  for (const auto& spec : config.arrays) {
    std::optional<ArrayGeometry> geometry;
    std::string geometry_error;
    try {
      geometry = from_spec(spec);
      const auto lc = difference_coarray(*geometry).consecutive_halfwidth();
      if (static_cast<Lag>(bearings.size()) > lc) {
        geometry_error = std::to_string(bearings.size()) + " sources exceed the " +
                         std::to_string(lc) + " resolvable by the consecutive coarray";
      }
    } catch (const std::exception& e) {
      geometry_error = e.what();
    }

    for (const double value : sweep) {
      RmseRow row;
      row.geometry = spec;
      row.kind = geometry ? std::string(to_string(geometry->kind())) : spec.substr(0, spec.find(':'));
      row.element_count = geometry ? static_cast<int>(geometry->element_count()) : 0;
      row.sweep_param = snr_sweep ? "snr_db" : "u1_mag";
      row.sweep_value = value;
      row.trials = config.trials;
      row.seed = config.seed;
      row.sources = static_cast<int>(bearings.size());
      row.snapshots = config.snapshots;
      row.snr_db = snr_sweep ? value : config.snr_db.front();
      row.u1_mag = snr_sweep ? config.u1_mag.front() : value;
      row.u1_arg = config.u1_arg;
      row.band_limit = config.band_limit;
      row.phase_decay = config.phase_decay;
      row.grid_points = config.grid_points;

      if (!geometry_error.empty()) {
        row.rmse_deg = row.rmse_excl_deg = std::numeric_limits<double>::quiet_NaN();
        row.underdetect_count = static_cast<std::size_t>(config.trials);
        row.note = geometry_error;
        rows.push_back(std::move(row));
        continue;
      }

      const auto coupling = CouplingModel::from_polar(row.u1_mag, row.u1_arg, row.band_limit, row.phase_decay);
      const auto batch = run_trials(*geometry, bearings, row.snr_db, row.snapshots, coupling,
                                    row.grid_points, row.trials, row.seed, config.threads);
      const auto excl = rmse(batch.results, bearings);
      row.rmse_deg = rmse_inclusive(batch.results, bearings);
      row.rmse_excl_deg = excl.rmse_deg;
      row.underdetect_count = excl.underdetected;
      if (batch.failures > 0) row.note = std::to_string(batch.failures) + " trial(s) failed";
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_rmse_csv(std::ostream& out, const std::vector<RmseRow>& rows, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "kind,sweep_param,sweep_value,rmse_deg,rmse_excl_deg,underdetect_count,trials,seed,"
         "geometry,K,sources,snapshots,snr_db,u1_mag,u1_arg,band_limit,phase_decay,grid_points,note\n";
  for (const auto& r : rows) {
    out << csv_field(r.kind) << ',' << r.sweep_param << ',' << format_float(r.sweep_value) << ','
        << format_float(r.rmse_deg) << ',' << format_float(r.rmse_excl_deg) << ','
        << r.underdetect_count << ',' << r.trials << ',' << r.seed << ',' << csv_field(r.geometry)
        << ',' << r.element_count << ',' << r.sources << ',' << r.snapshots << ','
        << format_float(r.snr_db) << ',' << format_float(r.u1_mag) << ',' << format_float(r.u1_arg)
        << ',' << r.band_limit << ',' << format_float(r.phase_decay) << ',' << r.grid_points << ','
        << csv_field(r.note) << '\n';
  }
}

}  // namespace sparsearray
