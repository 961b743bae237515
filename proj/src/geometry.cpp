#include "sparsearray/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "sparsearray/coarray.hpp"

namespace sparsearray {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw std::invalid_argument("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

void require_positive(int value, std::string_view what) {
  if (value < 1) throw DomainError(std::string(what) + " must be a positive integer");
}

}  // namespace

std::string_view to_string(ArrayKind kind) {
  switch (kind) {
    case ArrayKind::emisc: return "emisc";
    case ArrayKind::ula: return "ula";
    case ArrayKind::nested: return "nested";
    case ArrayKind::coprime: return "coprime";
    case ArrayKind::custom: return "custom";
  }
  return "custom";
}

ArrayKind parse_kind(std::string_view label) {
  label = trim(label);
  for (auto kind : {ArrayKind::emisc, ArrayKind::ula, ArrayKind::nested, ArrayKind::coprime,
                    ArrayKind::custom}) {
    if (label == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown array kind '" + std::string(label) + "'");
}

ArrayGeometry::ArrayGeometry(ArrayKind kind, std::vector<Position> positions)
    : kind_(kind), positions_(std::move(positions)) {
  if (positions_.empty()) throw std::invalid_argument("geometry needs at least one element");
  if (positions_.front() != 0) throw std::invalid_argument("geometry must start at position 0");
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (positions_[i] <= positions_[i - 1]) {
      throw std::invalid_argument("geometry positions must be strictly increasing (index " +
                                  std::to_string(i) + ")");
    }
  }
}

ArrayGeometry ArrayGeometry::normalized(ArrayKind kind, std::vector<Position> positions) {
  if (positions.empty()) throw std::invalid_argument("geometry needs at least one element");
  std::ranges::sort(positions);
  if (std::ranges::adjacent_find(positions) != positions.end()) {
    throw std::invalid_argument("geometry contains duplicate positions");
  }
  const auto origin = positions.front();
  for (auto& p : positions) p -= origin;
  return ArrayGeometry(kind, std::move(positions));
}

MaxIes::MaxIes(std::int64_t value) : value_(value) {
  if (value < 8 || value % 4 != 0) {
    throw std::invalid_argument("maximum IES must be a multiple of 4 and at least 8");
  }
}

MaxIes max_ies(int element_count) {
  if (element_count < kEmiscMinElements) {
    throw DomainError("EMISC requires a minimum element count of " +
                      std::to_string(kEmiscMinElements) + " (got " +
                      std::to_string(element_count) + ")");
  }
  return MaxIes(4 * ((element_count - 4) / 6) + 4);
}

std::size_t SubArraySpan::count() const noexcept {
  if (start > end) return 0;
  return static_cast<std::size_t>((end - start) / step + 1);
}

std::vector<SubArraySpan> emisc_subarrays(int element_count) {
  const Position L = max_ies(element_count).value();
  const Position K = element_count;
  // L is a multiple of 4, so every fractional coefficient below is exact.
  const Position sq8 = L * L / 8;
  const Position sq4 = L * L / 4;
  const Position q = L / 4;
  const Position h = L / 2;
  return {
      {0, 3, 3},
      {5, h + 1, 2},
      {h + 3, sq8 - q + 1, h + 1},
      {sq8 + q + 2, -7 * sq8 + K * L - 3 * q + 2, L},
      {-7 * sq8 + K * L + q + 2, -3 * sq4 + (K - 1) * L + 4, h - 1},
      {-3 * sq4 + K * L - h + 2, -3 * sq4 + K * L - h + 3, 1},
      {-3 * sq4 + K * L - h + 6, -3 * sq4 + K * L + 2, 2},
  };
}

ArrayGeometry emisc_positions(int element_count) {
  const auto spans = emisc_subarrays(element_count);
  std::vector<Position> positions;
  positions.reserve(static_cast<std::size_t>(element_count));
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto& span = spans[s];
    for (std::size_t i = 0; i < span.count(); ++i) {
      const Position p = span.start + static_cast<Position>(i) * span.step;
      if (!positions.empty() && p <= positions.back()) {
        throw ConstructionError("EMISC sub-array " + std::to_string(s + 1) +
                                " overlaps or precedes the previous sub-array at position " +
                                std::to_string(p));
      }
      positions.push_back(p);
    }
  }
  if (positions.size() != static_cast<std::size_t>(element_count)) {
    throw ConstructionError("EMISC construction produced " + std::to_string(positions.size()) +
                            " elements for K = " + std::to_string(element_count));
  }
  return ArrayGeometry(ArrayKind::emisc, std::move(positions));
}

ArrayGeometry ula_positions(int element_count) {
  require_positive(element_count, "ULA element count");
  std::vector<Position> positions(static_cast<std::size_t>(element_count));
  std::iota(positions.begin(), positions.end(), Position{0});
  return ArrayGeometry(ArrayKind::ula, std::move(positions));
}

ArrayGeometry nested_positions(int inner_count, int outer_count) {
  require_positive(inner_count, "nested inner count");
  require_positive(outer_count, "nested outer count");
  std::vector<Position> positions;
  for (Position i = 0; i < inner_count; ++i) positions.push_back(i);
  for (Position k = 0; k < outer_count; ++k) positions.push_back((inner_count + 1) * (k + 1) - 1);
  return ArrayGeometry::normalized(ArrayKind::nested, std::move(positions));
}

ArrayGeometry coprime_positions(int m, int n) {
  require_positive(m, "coprime M");
  require_positive(n, "coprime N");
  if (std::gcd(m, n) != 1) {
    throw DomainError("coprime array requires gcd(M, N) = 1 (got M = " + std::to_string(m) +
                      ", N = " + std::to_string(n) + ")");
  }
  std::vector<Position> positions;
  for (Position i = 0; i < n; ++i) positions.push_back(Position{m} * i);
  for (Position i = 0; i < 2 * m; ++i) positions.push_back(Position{n} * i);
  std::ranges::sort(positions);
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  return ArrayGeometry(ArrayKind::coprime, std::move(positions));
}

ArrayGeometry custom_positions(std::vector<Position> positions) {
  return ArrayGeometry::normalized(ArrayKind::custom, std::move(positions));
}

std::string to_line(const ArrayGeometry& geometry) {
  std::ostringstream out;
  out << to_string(geometry.kind()) << ' ' << geometry.element_count() << ' ';
  const auto positions = geometry.positions();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) out << ',';
    out << positions[i];
  }
  return out.str();
}

ArrayGeometry parse_line(std::string_view line) {
  line = trim(line);
  const auto first = line.find(' ');
  const auto second = first == std::string_view::npos ? first : line.find(' ', first + 1);
  if (second == std::string_view::npos) {
    throw std::invalid_argument("geometry line must be `kind K p0,p1,...`");
  }
  const auto kind = parse_kind(line.substr(0, first));
  const auto count = parse_integer<std::size_t>(line.substr(first + 1, second - first - 1), "K");
  std::vector<Position> positions;
  for (auto token : split(line.substr(second + 1), ',')) {
    positions.push_back(parse_integer<Position>(token, "position"));
  }
  if (positions.size() != count) {
    throw std::invalid_argument("geometry line declares K = " + std::to_string(count) + " but lists " +
                                std::to_string(positions.size()) + " positions");
  }
  return ArrayGeometry(kind, std::move(positions));
}

std::string to_json(const ArrayGeometry& geometry) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(geometry.kind());
  j["K"] = geometry.element_count();
  j["positions"] = std::vector<Position>(geometry.positions().begin(), geometry.positions().end());
  return j.dump();
}

ArrayGeometry parse_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  const auto kind = parse_kind(j.at("kind").get<std::string>());
  auto positions = j.at("positions").get<std::vector<Position>>();
  if (j.at("K").get<std::size_t>() != positions.size()) {
    throw std::invalid_argument("geometry record K does not match the position count");
  }
  return ArrayGeometry(kind, std::move(positions));
}

ArrayGeometry from_spec(std::string_view spec) {
  const auto parts = split(trim(spec), ':');
  const auto kind = parse_kind(parts[0]);
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) {
      throw std::invalid_argument("array spec '" + std::string(spec) + "' is missing a parameter");
    }
    return parse_integer<int>(parts[i], "array parameter");
  };
  auto expect_params = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      throw std::invalid_argument("array spec '" + std::string(spec) + "' expects " +
                                  std::to_string(n) + " parameter(s)");
    }
  };
  switch (kind) {
    case ArrayKind::emisc: expect_params(1); return emisc_positions(arg(1));
    case ArrayKind::ula: expect_params(1); return ula_positions(arg(1));
    case ArrayKind::nested:
      if (parts.size() == 2) return from_kind_and_count(kind, arg(1));
      expect_params(2);
      return nested_positions(arg(1), arg(2));
    case ArrayKind::coprime:
      if (parts.size() == 2) return from_kind_and_count(kind, arg(1));
      expect_params(2);
      return coprime_positions(arg(1), arg(2));
    case ArrayKind::custom: {
      expect_params(1);
      std::vector<Position> positions;
      for (auto token : split(parts[1], '/')) positions.push_back(parse_integer<Position>(token, "position"));
      return custom_positions(std::move(positions));
    }
  }
  throw std::invalid_argument("unsupported array spec");
}

ArrayGeometry from_kind_and_count(ArrayKind kind, int element_count) {
  switch (kind) {
    case ArrayKind::emisc: return emisc_positions(element_count);
    case ArrayKind::ula: return ula_positions(element_count);
    case ArrayKind::nested: {
      if (element_count < 2) throw DomainError("nested array needs at least 2 elements");
      const int inner = element_count / 2;
      return nested_positions(inner, element_count - inner);
    }
    case ArrayKind::coprime: {
      // N + 2M - 1 = K with M < N, gcd(M, N) = 1.
      std::optional<ArrayGeometry> best;
      std::int64_t best_udof = -1;
      for (int m = 2; 3 * m - 1 < element_count + 1; ++m) {
        const int n = element_count + 1 - 2 * m;
        if (n <= m || std::gcd(m, n) != 1) continue;
        auto candidate = coprime_positions(m, n);
        if (candidate.element_count() != static_cast<std::size_t>(element_count)) continue;
        const auto value = udof(difference_coarray(candidate));
        if (value > best_udof) {
          best_udof = value;
          best = std::move(candidate);
        }
      }
      if (!best) {
        throw DomainError("no coprime pair (M, N) yields exactly " + std::to_string(element_count) +
                          " elements");
      }
      return *std::move(best);
    }
    case ArrayKind::custom:
      throw DomainError("custom arrays need an explicit position list");
  }
  throw DomainError("unsupported array kind");
}

}  // namespace sparsearray
