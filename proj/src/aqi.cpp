#include "hwmon/aqi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace hwmon {

#include "aqi_table_data.inc"

namespace {

constexpr std::array<std::string_view, kPollutantCount> kNames = {"PM2.5", "PM10", "CO", "O3", "NO2", "SO2"};

int decimals_of(std::string_view token) {
  const auto dot = token.find('.');
  return dot == std::string_view::npos ? 0 : static_cast<int>(token.size() - dot - 1);
}

double truncate_to(double c, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(c * scale + 1e-9) / scale;
}

}  // namespace

std::string_view pollutant_name(Pollutant p) { return kNames.at(static_cast<int>(p)); }

std::optional<Pollutant> pollutant_from_name(std::string_view name) {
  for (int i = 0; i < kPollutantCount; ++i)
    if (kNames[i] == name) return static_cast<Pollutant>(i);
  if (name == "PM25") return Pollutant::PM25;
  return std::nullopt;
}

void AqiBreakpointTable::set_rows(Pollutant p, std::vector<BreakpointRow> rows, int decimals) {
  const std::string name(pollutant_name(p));
  if (rows.empty()) throw Error(ErrorCode::Parse, name + ": no breakpoint rows");
  if (rows.front().i_lo != 0.0 || rows.back().i_hi != 500.0)
    throw Error(ErrorCode::Parse, name + ": index rows must span 0 to 500");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (!(r.bp_lo >= 0.0 && r.bp_lo < r.bp_hi && r.i_lo < r.i_hi))
      throw Error(ErrorCode::Parse, name + ": row " + std::to_string(k) + " is not increasing");
    if (k > 0) {
      const auto& prev = rows[k - 1];
      if (!(r.bp_lo > prev.bp_hi))
        throw Error(ErrorCode::Parse, name + ": row " + std::to_string(k) + " overlaps the previous row");
      if (r.i_lo != prev.i_hi + 1.0)
        throw Error(ErrorCode::Parse, name + ": row " + std::to_string(k) + " index range is not contiguous");
    }
  }
  rows_[static_cast<int>(p)] = std::move(rows);
  decimals_[static_cast<int>(p)] = decimals;
}

AqiBreakpointTable parse_breakpoint_table(std::string_view text) {
  std::map<int, std::vector<BreakpointRow>> rows;
  std::map<int, int> decimals;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string name, lo, hi, ilo, ihi, extra;
    if (!(ls >> name)) continue;
    const auto where = "breakpoint table line " + std::to_string(line_no) + ": ";
    if (!(ls >> lo >> hi >> ilo >> ihi) || (ls >> extra))
      throw Error(ErrorCode::Parse, where + "expected 5 columns");
    if (name == "pollutant") continue;  // optional header row
    const auto p = pollutant_from_name(name);
    if (!p) throw Error(ErrorCode::Parse, where + "unknown pollutant '" + name + "'");
    BreakpointRow r;
    try {
      r = {std::stod(lo), std::stod(hi), std::stod(ilo), std::stod(ihi)};
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, where + "non-numeric column");
    }
    const int key = static_cast<int>(*p);
    rows[key].push_back(r);
    decimals[key] = std::max({decimals[key], decimals_of(lo), decimals_of(hi)});
  }
  AqiBreakpointTable table;
  for (auto& [key, r] : rows) table.set_rows(static_cast<Pollutant>(key), std::move(r), decimals[key]);
  return table;
}

AqiBreakpointTable load_breakpoint_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open breakpoint table '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_breakpoint_table(ss.str());
}

std::string_view epa_breakpoint_text() { return kEpaBreakpointText; }

const AqiBreakpointTable& AqiBreakpointTable::epa() {
  static const AqiBreakpointTable table = parse_breakpoint_table(kEpaBreakpointText);
  return table;
}

double sub_index(double c, const BreakpointRow& row) {
  // t is exactly 0 at BP_Lo and exactly 1 at BP_Hi, so the endpoints map to
  // I_Lo / I_Hi without rounding error.
  const double t = (c - row.bp_lo) / (row.bp_hi - row.bp_lo);
  return row.i_lo + (row.i_hi - row.i_lo) * t;
}

SubIndex sub_index(double concentration, Pollutant p, const AqiBreakpointTable& table) {
  if (!(concentration >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "negative concentration for " + std::string(pollutant_name(p)));
  const auto rows = table.rows(p);
  if (rows.empty())
    throw Error(ErrorCode::InvalidArgument, "no breakpoints for " + std::string(pollutant_name(p)));
  const double c = truncate_to(concentration, table.decimals(p));
  if (c > rows.back().bp_hi) return {500.0, true};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (c < rows[k].bp_lo) return {rows[k - 1].i_hi, false};  // between non-adjacent rows
    if (c <= rows[k].bp_hi) return {sub_index(c, rows[k]), false};
  }
  return {500.0, true};
}

CategoryInfo category(double value) {
  if (!(value >= 0.0 && value <= 500.0)) {
    std::ostringstream os;
    os << "AQI value " << value << " outside [0, 500]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  if (value <= 50.0) return {AqiCategory::Good, "Good", "Green"};
  if (value <= 100.0) return {AqiCategory::Moderate, "Moderate", "Yellow"};
  if (value <= 150.0) return {AqiCategory::UnhealthySensitive, "Unhealthy for Sensitive Groups", "Orange"};
  if (value <= 200.0) return {AqiCategory::Unhealthy, "Unhealthy", "Red"};
  if (value <= 300.0) return {AqiCategory::VeryUnhealthy, "Very Unhealthy", "Purple"};
  return {AqiCategory::Hazardous, "Hazardous", "Maroon"};
}

double AqiResult::reported() const { return std::round(value * 100.0) / 100.0; }

bool aqi_inputs_valid(std::span<const PollutantReading> readings) {
  std::array<bool, kPollutantCount> seen{};
  for (const auto& r : readings) seen[static_cast<int>(r.pollutant)] = true;
  const auto distinct = std::count(seen.begin(), seen.end(), true);
  return distinct >= 3 && (seen[static_cast<int>(Pollutant::PM25)] || seen[static_cast<int>(Pollutant::PM10)]);
}

AqiResult compute_aqi(std::span<const std::pair<Pollutant, double>> sub_indices) {
  if (sub_indices.empty()) throw AqiValidityError("no sub-indices");
  AqiResult result;
  bool first = true;
  for (const auto& [p, v] : sub_indices) result.sub_indices[static_cast<int>(p)] = v;
  // Walk in the fixed pollutant order so equal maxima resolve to the earliest pollutant.
  for (int i = 0; i < kPollutantCount; ++i) {
    const auto& v = result.sub_indices[i];
    if (!v) continue;
    if (first || *v > result.value) {
      result.value = *v;
      result.dominant = static_cast<Pollutant>(i);
      first = false;
    }
  }
  return result;
}

AqiResult compute_aqi(std::span<const PollutantReading> readings, const AqiBreakpointTable& table) {
  if (!aqi_inputs_valid(readings))
    throw AqiValidityError("AQI needs at least three pollutants including PM2.5 or PM10");
  std::array<std::vector<double>, kPollutantCount> values;
  for (const auto& r : readings) {
    if (!(r.concentration >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative concentration");
    values[static_cast<int>(r.pollutant)].push_back(r.concentration);
  }
  std::vector<std::pair<Pollutant, double>> subs;
  bool clamped = false;
  for (int i = 0; i < kPollutantCount; ++i) {
    auto& v = values[i];
    if (v.empty()) continue;
    // Sorted summation keeps the mean independent of reading order.
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    const auto si = sub_index(sum / static_cast<double>(v.size()), static_cast<Pollutant>(i), table);
    clamped = clamped || si.out_of_range;
    subs.emplace_back(static_cast<Pollutant>(i), si.value);
  }
  auto result = compute_aqi(std::span<const std::pair<Pollutant, double>>(subs));
  result.out_of_range = clamped;
  return result;
}

}  // namespace hwmon
