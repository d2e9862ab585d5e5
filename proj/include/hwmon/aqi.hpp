// US-EPA air quality index: breakpoint tables, sub-indices and the max rule.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hwmon/core.hpp"

namespace hwmon {

/// Fixed order; also the tie-break order for the dominant pollutant.
enum class Pollutant : int { PM25 = 0, PM10, CO, O3, NO2, SO2 };
inline constexpr int kPollutantCount = 6;

std::string_view pollutant_name(Pollutant p);
std::optional<Pollutant> pollutant_from_name(std::string_view name);

struct PollutantReading {
  Pollutant pollutant = Pollutant::PM25;
  double concentration = 0.0;  // ug/m3 for PM, ppm for CO/O3, ppb for NO2/SO2
  double timestamp = 0.0;
  Position location;
};

struct BreakpointRow {
  double bp_lo = 0.0;
  double bp_hi = 0.0;
  double i_lo = 0.0;
  double i_hi = 0.0;
};

class AqiBreakpointTable {
 public:
  AqiBreakpointTable() = default;

  /// Rows must be sorted by concentration, non-overlapping, with index ranges
  /// chaining I_Lo(k+1) = I_Hi(k) + 1 from 0 to 500. Throws Error(Parse) otherwise.
  void set_rows(Pollutant p, std::vector<BreakpointRow> rows, int decimals);

  std::span<const BreakpointRow> rows(Pollutant p) const { return rows_[static_cast<int>(p)]; }
  /// Reporting resolution (digits after the decimal point) used to truncate concentrations.
  int decimals(Pollutant p) const { return decimals_[static_cast<int>(p)]; }
  bool has(Pollutant p) const { return !rows_[static_cast<int>(p)].empty(); }

  /// Table shipped with the library (AirNow technical assistance document, 2018 revision).
  static const AqiBreakpointTable& epa();

 private:
  std::array<std::vector<BreakpointRow>, kPollutantCount> rows_;
  std::array<int, kPollutantCount> decimals_{};
};

/// Whitespace- or comma-separated columns: pollutant BP_Lo BP_Hi I_Lo I_Hi.
/// '#' starts a comment. Each pollutant's resolution is the largest number of
/// decimals written in its breakpoint columns.
AqiBreakpointTable parse_breakpoint_table(std::string_view text);
AqiBreakpointTable load_breakpoint_table(const std::string& path);
std::string_view epa_breakpoint_text();

struct SubIndex {
  double value = 0.0;
  bool out_of_range = false;  // concentration above the top breakpoint, clamped to 500
};

/// Piecewise-linear interpolation inside the bracketing row. Throws
/// Error(InvalidArgument) for negative concentrations.
SubIndex sub_index(double concentration, Pollutant p, const AqiBreakpointTable& table);

/// Same interpolation against one explicit row.
double sub_index(double concentration, const BreakpointRow& row);

enum class AqiCategory : int { Good = 0, Moderate, UnhealthySensitive, Unhealthy, VeryUnhealthy, Hazardous };

struct CategoryInfo {
  AqiCategory category;
  std::string_view label;
  std::string_view color;
};

/// Throws Error(OutOfRange) outside [0, 500].
CategoryInfo category(double value);

struct AqiResult {
  double value = 0.0;
  Pollutant dominant = Pollutant::PM25;
  std::array<std::optional<double>, kPollutantCount> sub_indices{};
  bool out_of_range = false;

  double reported() const;  // rounded to 2 decimals
};

/// Thrown when fewer than three pollutants are present or neither PM fraction is.
class AqiValidityError : public Error {
 public:
  explicit AqiValidityError(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

/// Readings are averaged per pollutant before conversion.
AqiResult compute_aqi(std::span<const PollutantReading> readings, const AqiBreakpointTable& table);

/// Max rule over already-converted sub-indices.
AqiResult compute_aqi(std::span<const std::pair<Pollutant, double>> sub_indices);

/// True when the readings satisfy the three-pollutant / particulate rule.
bool aqi_inputs_valid(std::span<const PollutantReading> readings);

}  // namespace hwmon
