#include "sparsearray/coarray.hpp"

#include <algorithm>
#include <ostream>

namespace sparsearray {

CoarrayTable::CoarrayTable(std::size_t element_count, std::vector<Weight> weights)
    : element_count_(element_count), weights_(std::move(weights)) {
  if (weights_.empty() || weights_.size() % 2 == 0) {
    throw std::invalid_argument("coarray weight table must cover an odd, symmetric lag range");
  }
  max_lag_ = static_cast<Lag>(weights_.size() / 2);
  while (consecutive_halfwidth_ < max_lag_ && supports(consecutive_halfwidth_ + 1)) {
    ++consecutive_halfwidth_;
  }
  for (Lag lag = 1; lag <= max_lag_; ++lag) {
    if (!supports(lag)) holes_.push_back(lag);
  }
}

Weight CoarrayTable::weight(Lag lag) const noexcept {
  if (lag < -max_lag_ || lag > max_lag_) return 0;
  return weights_[static_cast<std::size_t>(lag + max_lag_)];
}

CoarrayTable difference_coarray(const ArrayGeometry& geometry) {
  const auto positions = geometry.positions();
  const Lag max_lag = geometry.aperture();
  std::vector<Weight> weights(static_cast<std::size_t>(2 * max_lag + 1), 0);
  for (const auto a : positions) {
    for (const auto b : positions) ++weights[static_cast<std::size_t>(a - b + max_lag)];
  }
  return CoarrayTable(positions.size(), std::move(weights));
}

std::int64_t udof(const CoarrayTable& table) { return 2 * table.consecutive_halfwidth() + 1; }

WeightTriple first_three_weights(const CoarrayTable& table) {
  return {table.weight(1), table.weight(2), table.weight(3)};
}

std::int64_t closed_form_udof_emisc(int element_count) {
  const std::int64_t L = max_ies(element_count).value();
  const std::int64_t K = element_count;
  return -3 * L * L / 2 + (2 * K - 1) * L + 7;
}

namespace {

// 3 * (2K^2/3 - 2K/3 + c) for the three K%6 branches, {3,4}, {2,5}, {0,1}.
std::int64_t piecewise_udof(int element_count, std::int64_t c34, std::int64_t c25,
                            std::int64_t c01) {
  max_ies(element_count);  // domain check
  const std::int64_t K = element_count;
  std::int64_t tripled = 2 * K * K - 2 * K;
  switch (K % 6) {
    case 3:
    case 4: tripled += c34; break;
    case 2:
    case 5: tripled += c25; break;
    default: tripled += c01; break;
  }
  return tripled / 3;
}

}  // namespace

std::int64_t closed_form_udof_emisc_piecewise(int element_count) {
  return piecewise_udof(element_count, 9, 17, 21);
}

std::int64_t closed_form_udof_imisc(int element_count) {
  return piecewise_udof(element_count, -3, 5, 9);
}

WeightTriple closed_form_weights_emisc(int element_count) {
  max_ies(element_count);
  if (element_count < 16) return {1, 2, 2};
  return {1, 2 * ((element_count - 4) / 6), 2};
}

WeightTriple closed_form_weights_imisc(int element_count) {
  max_ies(element_count);
  if (element_count < 16) return {2, 5, 2};
  return {2, 2 * ((element_count + 2) / 6), 1};
}

Lag emisc_first_hole(int element_count) {
  const Lag L = max_ies(element_count).value();
  const Lag K = element_count;
  return -3 * L * L / 4 + K * L - L / 2 + 4;
}

bool RangeReport::passed() const noexcept {
  return std::ranges::all_of(ranges, [](const RangeCheck& r) { return r.contained; }) &&
         union_contiguous && union_matches_expected && hole_confirmed;
}

RangeReport verify_consecutive_ranges(int element_count) {
  const Lag L = max_ies(element_count).value();
  const Lag K = element_count;
  const auto table = difference_coarray(emisc_positions(element_count));

  const Lag r1_end = L * L / 8 - L / 4 + 1;
  const Lag r2_end = -7 * L * L / 8 + K * L - L / 4;
  const Lag r3_end = -3 * L * L / 4 + K * L - L / 2 + 3;

  RangeReport report;
  report.element_count = element_count;
  report.max_ies = L;
  report.ranges = {RangeCheck{"R1", {0, r1_end}}, RangeCheck{"R2", {r1_end, r2_end}},
                   RangeCheck{"R3", {r2_end + 1, r3_end}}};

  for (auto& check : report.ranges) {
    check.contained = check.range.first <= check.range.last;
    for (Lag lag = check.range.first; check.contained && lag <= check.range.last; ++lag) {
      check.contained = table.supports(lag);
    }
  }

  // Sweep the ranges in order of their start to build the union.
  auto sorted = report.ranges;
  std::ranges::sort(sorted, {}, [](const RangeCheck& c) { return c.range.first; });
  report.union_range = sorted.front().range;
  report.union_contiguous = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto& next = sorted[i].range;
    if (next.first > report.union_range.last + 1) report.union_contiguous = false;
    report.union_range.last = std::max(report.union_range.last, next.last);
  }
  report.union_matches_expected = report.union_range == LagRange{0, r3_end};
  report.hole_confirmed = !table.supports(emisc_first_hole(element_count));
  return report;
}

void write_coarray_csv(std::ostream& out, const CoarrayTable& table) {
  out << "lag,weight\n";
  for (Lag lag = -table.max_lag(); lag <= table.max_lag(); ++lag) {
    if (const auto w = table.weight(lag); w > 0) out << lag << ',' << w << '\n';
  }
}

CoarraySummary summarize(const CoarrayTable& table) {
  CoarraySummary s;
  s.element_count = table.element_count();
  s.aperture = table.max_lag();
  s.consecutive_halfwidth = table.consecutive_halfwidth();
  s.udof = udof(table);
  s.weights = first_three_weights(table);
  s.hole_count = table.holes().size();
  const auto shown = std::min<std::size_t>(table.holes().size(), 20);
  s.holes.assign(table.holes().begin(), table.holes().begin() + static_cast<std::ptrdiff_t>(shown));
  return s;
}

}  // namespace sparsearray
