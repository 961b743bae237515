#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsearray/geometry.hpp"

namespace sparsearray {

using Lag = std::int64_t;
using Weight = std::int64_t;

/// Weight function of the difference coarray, stored over the full signed lag
/// range [-max_lag, max_lag] (zero where a lag is unsupported).
class CoarrayTable {
 public:
  CoarrayTable(std::size_t element_count, std::vector<Weight> weights);

  std::size_t element_count() const noexcept { return element_count_; }
  Lag max_lag() const noexcept { return max_lag_; }

  /// Number of ordered sensor pairs with p_a - p_b = lag; 0 outside the table.
  Weight weight(Lag lag) const noexcept;
  bool supports(Lag lag) const noexcept { return weight(lag) > 0; }

  /// Half-width Lc of the maximal zero-centred run of supported lags.
  Lag consecutive_halfwidth() const noexcept { return consecutive_halfwidth_; }

  /// Positive lags in [1, max_lag] that are absent from the coarray.
  const std::vector<Lag>& holes() const noexcept { return holes_; }

  /// Dense weights, index i corresponds to lag i - max_lag.
  const std::vector<Weight>& dense_weights() const noexcept { return weights_; }

 private:
  std::size_t element_count_;
  Lag max_lag_;
  std::vector<Weight> weights_;
  Lag consecutive_halfwidth_ = 0;
  std::vector<Lag> holes_;
};

CoarrayTable difference_coarray(const ArrayGeometry& geometry);

/// 2 Lc + 1.
std::int64_t udof(const CoarrayTable& table);

using WeightTriple = std::array<Weight, 3>;

WeightTriple first_three_weights(const CoarrayTable& table);

// Closed-form predictors. All require K >= 10 and throw DomainError otherwise.

/// -3L^2/2 + (2K - 1)L + 7 with L = max_ies(K).
std::int64_t closed_form_udof_emisc(int element_count);

/// Piecewise-in-K%6 form of the EMISC uDOF: 2K^2/3 - 2K/3 + {3, 17/3, 7}.
std::int64_t closed_form_udof_emisc_piecewise(int element_count);

/// IMISC uDOF: 2K^2/3 - 2K/3 + {-1, 5/3, 3}.
std::int64_t closed_form_udof_imisc(int element_count);

WeightTriple closed_form_weights_emisc(int element_count);
WeightTriple closed_form_weights_imisc(int element_count);

/// Lag of the first hole of the EMISC coarray, -3L^2/4 + (K - 1/2)L + 4.
Lag emisc_first_hole(int element_count);

struct LagRange {
  Lag first;
  Lag last;
  bool operator==(const LagRange&) const = default;
};

struct RangeCheck {
  std::string name;
  LagRange range;
  bool contained = false;
};

/// Numerical check that the three consecutive ranges making up the positive
/// EMISC coarray are present in the brute-force coarray of emisc_positions(K).
struct RangeReport {
  int element_count = 0;
  std::int64_t max_ies = 0;
  std::array<RangeCheck, 3> ranges;
  LagRange union_range{0, 0};
  bool union_contiguous = false;
  bool union_matches_expected = false;
  bool hole_confirmed = false;

  bool passed() const noexcept;
};

RangeReport verify_consecutive_ranges(int element_count);

/// Writes `lag,weight` rows for every supported lag, ascending.
void write_coarray_csv(std::ostream& out, const CoarrayTable& table);

struct CoarraySummary {
  std::size_t element_count = 0;
  Lag aperture = 0;
  Lag consecutive_halfwidth = 0;
  std::int64_t udof = 0;
  WeightTriple weights{};
  std::vector<Lag> holes;  // first 20
  std::size_t hole_count = 0;
};

CoarraySummary summarize(const CoarrayTable& table);

}  // namespace sparsearray
