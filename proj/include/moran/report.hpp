#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "moran/construction.hpp"
#include "moran/dimension.hpp"
#include "moran/measure.hpp"
#include "moran/oracle.hpp"

namespace moran {

/// Reports carry doubles rounded to 9 significant digits, so a report
/// survives a JSON round trip unchanged.
double round9(double x);

struct ConstructionSummary {
  int preperiod_length = 0;
  int period_length = 0;
  int n_plus = 0;
  std::string orientation;
  friend bool operator==(const ConstructionSummary&, const ConstructionSummary&) = default;
};

struct TailSummary {
  double limit = 0.0;
  double tail_min = 0.0;
  double tail_max = 0.0;
  double oscillation = 0.0;
  int window = 0;
  bool periodic_tail = true;
  friend bool operator==(const TailSummary&, const TailSummary&) = default;
};

struct GapSummary {
  double value = 0.0;
  double numeric = 0.0;
  double numeric_oscillation = 0.0;
  double zeta_last = 0.0;
  double oscillation = 0.0;
  double error_bar = 0.0;
  int gap_limit = 0;
  int k_scan = 0;
  bool stabilized = true;
  friend bool operator==(const GapSummary&, const GapSummary&) = default;
};

struct DimsSection {
  double lower_box = 0.0;
  double upper_box = 0.0;
  double lower_dim = 0.0;
  double assouad = 0.0;
  bool chain_holds = true;
  TailSummary box;
  GapSummary lower;
  GapSummary upper;
  friend bool operator==(const DimsSection&, const DimsSection&) = default;
};

struct LocalDimSummary {
  std::uint64_t seed = 0;
  int samples = 0;
  int k_max = 0;
  double mean_tail_min = 0.0;  // over samples, min of the ratio on (k_max/2, k_max]
  double mean_tail_max = 0.0;
  friend bool operator==(const LocalDimSummary&, const LocalDimSummary&) = default;
};

struct MeasureSection {
  std::string source;  // "uniform" or "explicit"
  double entropy_lower = 0.0;
  double entropy_upper = 0.0;
  double hausdorff = 0.0;
  double packing = 0.0;
  TailSummary entropy;
  bool fsc = false;
  std::string fsc_frequency;
  bool bsc = false;
  std::vector<std::string> bsc_sides;  // left, right, bottom, top
  bool msc = false;
  std::string max_boundary_marginal;
  std::string status;  // UNCONDITIONAL or CONDITIONAL
  bool set_dimension_path = false;
  std::optional<LocalDimSummary> local_dim;
  friend bool operator==(const MeasureSection&, const MeasureSection&) = default;
};

struct OracleCheck {
  std::string name;
  bool passed = true;
  std::uint64_t comparisons = 0;
  std::string detail;
  friend bool operator==(const OracleCheck&, const OracleCheck&) = default;
};

struct OracleSection {
  int max_depth = 0;
  int pairs_depth = 0;
  bool passed = true;
  std::vector<OracleCheck> checks;
  friend bool operator==(const OracleSection&, const OracleSection&) = default;
};

struct RunReport {
  std::string command;
  ConstructionSummary construction;
  std::optional<DimsSection> dims;
  std::optional<MeasureSection> measure;
  std::optional<OracleSection> oracle;
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

ConstructionSummary summarize(const Construction& c);
DimsSection dims_section(const DimensionReport& rep, int gap_limit);
MeasureSection measure_section(const MeasureDimensions& md, bool uniform);
LocalDimSummary local_dim_summary(const std::vector<oracle::LocalDimSample>& samples,
                                  std::uint64_t seed, int k_max);
OracleSection oracle_section(const std::vector<oracle::CheckResult>& checks, int max_depth,
                             int pairs_depth);

std::string to_json(const RunReport& report);
RunReport report_from_json(std::string_view text);
/// Flat "key,value" lines with dotted keys, header first.
std::string to_csv(const RunReport& report);

}  // namespace moran
