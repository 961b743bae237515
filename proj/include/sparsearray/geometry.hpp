#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sparsearray {

/// Sensor positions are integers in units of d = lambda/2.
using Position = std::int64_t;

enum class ArrayKind { emisc, ula, nested, coprime, custom };

std::string_view to_string(ArrayKind kind);
ArrayKind parse_kind(std::string_view label);

/// Raised when a generator is called outside its domain (e.g. K below the
/// minimum element count of the EMISC construction).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a closed-form construction does not produce a valid position set.
class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A linear array: strictly increasing integer positions starting at 0.
class ArrayGeometry {
 public:
  /// Validates that `positions` is strictly increasing and starts at 0.
  ArrayGeometry(ArrayKind kind, std::vector<Position> positions);

  /// Sorts, rejects duplicates and shifts so the first sensor sits at 0.
  static ArrayGeometry normalized(ArrayKind kind, std::vector<Position> positions);

  ArrayKind kind() const noexcept { return kind_; }
  std::span<const Position> positions() const noexcept { return positions_; }
  std::size_t element_count() const noexcept { return positions_.size(); }
  Position aperture() const noexcept { return positions_.back(); }

  bool operator==(const ArrayGeometry&) const = default;

 private:
  ArrayKind kind_;
  std::vector<Position> positions_;
};

/// Maximum inter-element spacing L = 4*floor((K-4)/6) + 4 of the EMISC array.
class MaxIes {
 public:
  explicit MaxIes(std::int64_t value);
  std::int64_t value() const noexcept { return value_; }

 private:
  std::int64_t value_;
};

inline constexpr int kEmiscMinElements = 10;

MaxIes max_ies(int element_count);

/// EMISC position set: union of seven uniform linear sub-arrays evaluated at
/// L = max_ies(K). Always has exactly K elements and aperture -3L^2/4 + KL + 2.
ArrayGeometry emisc_positions(int element_count);

/// Start, end (inclusive) and step of one EMISC sub-array.
struct SubArraySpan {
  Position start;
  Position end;
  Position step;
  std::size_t count() const noexcept;
};

/// The seven sub-array spans that make up emisc_positions(K), in order.
std::vector<SubArraySpan> emisc_subarrays(int element_count);

ArrayGeometry ula_positions(int element_count);

/// Two-level nested array: {0..K1-1} U {(K1+1)(k+1)-1, k = 0..K2-1}.
ArrayGeometry nested_positions(int inner_count, int outer_count);

/// Prototype coprime array: {M n, n < N} U {N m, m < 2M}; gcd(M, N) must be 1.
ArrayGeometry coprime_positions(int m, int n);

ArrayGeometry custom_positions(std::vector<Position> positions);

/// One-line text form: `kind K p0,p1,...,p{K-1}`.
std::string to_line(const ArrayGeometry& geometry);
ArrayGeometry parse_line(std::string_view line);

/// JSON record with the fields kind, K and positions.
std::string to_json(const ArrayGeometry& geometry);
ArrayGeometry parse_json(std::string_view text);

/// Builds a geometry from a compact spec such as `emisc:16`, `ula:8`,
/// `nested:4:4`, `coprime:3:4` or `custom:0/1/4/6`.
ArrayGeometry from_spec(std::string_view spec);

/// Builds a `kind` geometry with exactly `element_count` sensors. Nested uses
/// K1 = K/2, K2 = K - K1. Coprime picks the (M, N) pair with N + 2M - 1 = K
/// that has the largest consecutive coarray (smaller M on ties).
ArrayGeometry from_kind_and_count(ArrayKind kind, int element_count);

}  // namespace sparsearray
