#include "sparsearray/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sparsearray/signal.hpp"

namespace sparsearray {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto pos = value.find(',', start);
    const auto item = trim(value.substr(start, pos - start));
    if (!item.empty()) items.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return items;
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("config key '" + std::string(key) + "': cannot parse '" +
                                std::string(text) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_number_list(std::string_view value, std::string_view key) {
  std::vector<T> out;
  for (auto item : split_list(value)) out.push_back(parse_number<T>(item, key));
  if (out.empty()) throw std::invalid_argument("config key '" + std::string(key) + "' is empty");
  return out;
}

std::vector<std::string> parse_string_list(std::string_view value, std::string_view key) {
  std::vector<std::string> out;
  for (auto item : split_list(value)) out.emplace_back(item);
  if (out.empty()) throw std::invalid_argument("config key '" + std::string(key) + "' is empty");
  return out;
}

}  // namespace

std::string_view to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::design: return "design";
    case Experiment::curves: return "curves";
    case Experiment::rmse_vs_snr: return "rmse_vs_snr";
    case Experiment::rmse_vs_u1: return "rmse_vs_u1";
  }
  return "design";
}

Experiment parse_experiment(std::string_view label) {
  label = trim(label);
  for (auto e : {Experiment::design, Experiment::curves, Experiment::rmse_vs_snr, Experiment::rmse_vs_u1}) {
    if (label == to_string(e)) return e;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(label) + "'");
}

std::vector<double> ExperimentConfig::resolved_bearings() const {
  if (!bearings.empty()) return bearings;
  return uniform_bearings(sources, bearing_min, bearing_max);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (trials < 1) fail("trials must be >= 1");
  if (snapshots < 1) fail("snapshots must be >= 1");
  if (sources < 1) fail("sources must be >= 1");
  if (grid_points < 3) fail("grid_points must be >= 3");
  if (band_limit < 1) fail("band_limit must be >= 1");
  if (threads < 0) fail("threads must be >= 0");
  if (!bearings.empty() && static_cast<int>(bearings.size()) != sources) {
    fail("bearings list has " + std::to_string(bearings.size()) + " entries but sources = " +
         std::to_string(sources));
  }
  if (bearings.empty() && !(bearing_min < bearing_max)) fail("bearing_min must be < bearing_max");
  for (double m : u1_mag) {
    if (!(m >= 0.0 && m < 1.0)) fail("u1_mag values must lie in [0, 1)");
  }
  if (experiment == Experiment::rmse_vs_snr && u1_mag.size() != 1) {
    fail("rmse_vs_snr needs exactly one u1_mag value");
  }
  if (experiment == Experiment::rmse_vs_u1 && snr_db.size() != 1) {
    fail("rmse_vs_u1 needs exactly one snr_db value");
  }
  if (arrays.empty()) fail("arrays must list at least one geometry");
  if (experiment == Experiment::curves && k_min > k_max) fail("k_min must be <= k_max");
  SourceScenario probe;
  probe.bearings_deg = resolved_bearings();
  probe.validate();
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected `key = value`");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (key == "experiment") config.experiment = parse_experiment(value);
      else if (key == "arrays") config.arrays = parse_string_list(value, key);
      else if (key == "kinds") config.kinds = parse_string_list(value, key);
      else if (key == "k_min") config.k_min = parse_number<int>(value, key);
      else if (key == "k_max") config.k_max = parse_number<int>(value, key);
      else if (key == "sources") config.sources = parse_number<int>(value, key);
      else if (key == "bearings") config.bearings = parse_number_list<double>(value, key);
      else if (key == "bearing_min") config.bearing_min = parse_number<double>(value, key);
      else if (key == "bearing_max") config.bearing_max = parse_number<double>(value, key);
      else if (key == "snapshots") config.snapshots = parse_number<int>(value, key);
      else if (key == "snr_db") config.snr_db = parse_number_list<double>(value, key);
      else if (key == "u1_mag") config.u1_mag = parse_number_list<double>(value, key);
      else if (key == "u1_arg") config.u1_arg = parse_number<double>(value, key);
      else if (key == "band_limit") config.band_limit = parse_number<int>(value, key);
      else if (key == "phase_decay") config.phase_decay = parse_number<double>(value, key);
      else if (key == "grid_points") config.grid_points = parse_number<int>(value, key);
      else if (key == "trials") config.trials = parse_number<int>(value, key);
      else if (key == "seed") config.seed = parse_number<std::uint64_t>(value, key);
      else if (key == "threads") config.threads = parse_number<int>(value, key);
      else if (key == "output") config.output = std::string(value);
      else throw std::invalid_argument("unknown key '" + std::string(key) + "'");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

ExperimentConfig default_config(Experiment experiment) {
  ExperimentConfig config;
  config.experiment = experiment;
  if (experiment == Experiment::rmse_vs_snr) config.u1_mag = {0.3};
  if (experiment == Experiment::rmse_vs_u1) config.snr_db = {0.0};
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  const auto body = text.str();

  // The experiment key selects the defaults, so read it first.
  ExperimentConfig probe;
  apply_config_text(probe, body);
  ExperimentConfig config = default_config(probe.experiment);
  apply_config_text(config, body);
  return config;
}

}  // namespace sparsearray
