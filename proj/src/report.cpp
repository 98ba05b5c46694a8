#include "moran/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

namespace moran {

using ojson = nlohmann::ordered_json;

double round9(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

namespace {

std::string orientation_name(Orientation o) {
  switch (o) {
    case Orientation::wide: return "wide";
    case Orientation::tall: return "tall";
    case Orientation::balanced: return "balanced";
  }
  return "";
}

TailSummary tail_summary(const TailEstimate& t) {
  return {round9(t.limit), round9(t.tail_min),   round9(t.tail_max),
          round9(t.oscillation), t.window, t.periodic_tail};
}

GapSummary gap_summary(const GapLimitEstimate& g) {
  return {round9(g.value),     round9(g.numeric),   round9(g.numeric_oscillation),
          round9(g.zeta_last), round9(g.oscillation), round9(g.error_bar),
          g.gap_limit,         g.k_scan,            g.stabilized};
}

}  // namespace

ConstructionSummary summarize(const Construction& c) {
  return {static_cast<int>(c.preperiod().size()), static_cast<int>(c.period().size()), n_plus(c),
          orientation_name(period_profile(c).orientation)};
}

DimsSection dims_section(const DimensionReport& rep, int gap_limit) {
  DimsSection s;
  s.lower_box = round9(rep.lower_box);
  s.upper_box = round9(rep.upper_box);
  s.lower_dim = round9(rep.lower_dim);
  s.assouad = round9(rep.assouad);
  s.chain_holds = rep.chain_holds;
  s.box = tail_summary(rep.box);
  s.lower = gap_summary(rep.lower);
  s.upper = gap_summary(rep.upper);
  s.lower.gap_limit = s.upper.gap_limit = gap_limit;
  return s;
}

MeasureSection measure_section(const MeasureDimensions& md, bool uniform) {
  MeasureSection s;
  s.source = uniform ? "uniform" : "explicit";
  s.entropy_lower = round9(md.entropy.lower);
  s.entropy_upper = round9(md.entropy.upper);
  s.hausdorff = round9(md.hausdorff);
  s.packing = round9(md.packing);
  s.entropy = tail_summary(md.entropy);
  s.fsc = md.fsc.holds;
  s.fsc_frequency = md.fsc.frequency.str();
  s.bsc = md.bsc.holds;
  s.bsc_sides = {md.bsc.left.str(), md.bsc.right.str(), md.bsc.bottom.str(), md.bsc.top.str()};
  s.msc = md.msc.holds;
  s.max_boundary_marginal = md.msc.max_boundary_marginal.str();
  s.status = md.unconditional ? "UNCONDITIONAL" : "CONDITIONAL";
  s.set_dimension_path = md.set_dimension_path;
  return s;
}

LocalDimSummary local_dim_summary(const std::vector<oracle::LocalDimSample>& samples,
                                  std::uint64_t seed, int k_max) {
  LocalDimSummary s{seed, static_cast<int>(samples.size()), k_max, 0.0, 0.0};
  if (samples.empty()) return s;
  CompensatedSum lo, hi;
  for (const auto& sample : samples) {
    const auto from = sample.ratios.begin() + static_cast<std::ptrdiff_t>(sample.ratios.size() / 2);
    const auto [mn, mx] = std::minmax_element(from, sample.ratios.end());
    lo.add(*mn);
    hi.add(*mx);
  }
  s.mean_tail_min = round9(lo.value() / static_cast<double>(samples.size()));
  s.mean_tail_max = round9(hi.value() / static_cast<double>(samples.size()));
  return s;
}

OracleSection oracle_section(const std::vector<oracle::CheckResult>& checks, int max_depth,
                             int pairs_depth) {
  OracleSection s{max_depth, pairs_depth, true, {}};
  for (const auto& c : checks) {
    s.checks.push_back({c.name, c.passed, c.comparisons, c.detail});
    s.passed = s.passed && c.passed;
  }
  return s;
}

// ---- JSON ------------------------------------------------------------------

void to_json(ojson& j, const ConstructionSummary& s) {
  j = ojson{{"preperiod_length", s.preperiod_length},
            {"period_length", s.period_length},
            {"n_plus", s.n_plus},
            {"orientation", s.orientation}};
}
void from_json(const ojson& j, ConstructionSummary& s) {
  j.at("preperiod_length").get_to(s.preperiod_length);
  j.at("period_length").get_to(s.period_length);
  j.at("n_plus").get_to(s.n_plus);
  j.at("orientation").get_to(s.orientation);
}

void to_json(ojson& j, const TailSummary& s) {
  j = ojson{{"limit", s.limit},           {"tail_min", s.tail_min}, {"tail_max", s.tail_max},
            {"oscillation", s.oscillation}, {"window", s.window},     {"periodic_tail", s.periodic_tail}};
}
void from_json(const ojson& j, TailSummary& s) {
  j.at("limit").get_to(s.limit);
  j.at("tail_min").get_to(s.tail_min);
  j.at("tail_max").get_to(s.tail_max);
  j.at("oscillation").get_to(s.oscillation);
  j.at("window").get_to(s.window);
  j.at("periodic_tail").get_to(s.periodic_tail);
}

void to_json(ojson& j, const GapSummary& s) {
  j = ojson{{"value", s.value},
            {"numeric", s.numeric},
            {"numeric_oscillation", s.numeric_oscillation},
            {"zeta_last", s.zeta_last},
            {"oscillation", s.oscillation},
            {"error_bar", s.error_bar},
            {"gap_limit", s.gap_limit},
            {"k_scan", s.k_scan},
            {"stabilized", s.stabilized}};
}
void from_json(const ojson& j, GapSummary& s) {
  j.at("value").get_to(s.value);
  j.at("numeric").get_to(s.numeric);
  j.at("numeric_oscillation").get_to(s.numeric_oscillation);
  j.at("zeta_last").get_to(s.zeta_last);
  j.at("oscillation").get_to(s.oscillation);
  j.at("error_bar").get_to(s.error_bar);
  j.at("gap_limit").get_to(s.gap_limit);
  j.at("k_scan").get_to(s.k_scan);
  j.at("stabilized").get_to(s.stabilized);
}

void to_json(ojson& j, const DimsSection& s) {
  j = ojson{{"lower_box", s.lower_box}, {"upper_box", s.upper_box}, {"lower_dim", s.lower_dim},
            {"assouad", s.assouad},     {"chain_holds", s.chain_holds}, {"box", s.box},
            {"lower", s.lower},         {"upper", s.upper}};
}
void from_json(const ojson& j, DimsSection& s) {
  j.at("lower_box").get_to(s.lower_box);
  j.at("upper_box").get_to(s.upper_box);
  j.at("lower_dim").get_to(s.lower_dim);
  j.at("assouad").get_to(s.assouad);
  j.at("chain_holds").get_to(s.chain_holds);
  j.at("box").get_to(s.box);
  j.at("lower").get_to(s.lower);
  j.at("upper").get_to(s.upper);
}

void to_json(ojson& j, const LocalDimSummary& s) {
  j = ojson{{"seed", s.seed},
            {"samples", s.samples},
            {"k_max", s.k_max},
            {"mean_tail_min", s.mean_tail_min},
            {"mean_tail_max", s.mean_tail_max}};
}
void from_json(const ojson& j, LocalDimSummary& s) {
  j.at("seed").get_to(s.seed);
  j.at("samples").get_to(s.samples);
  j.at("k_max").get_to(s.k_max);
  j.at("mean_tail_min").get_to(s.mean_tail_min);
  j.at("mean_tail_max").get_to(s.mean_tail_max);
}

void to_json(ojson& j, const MeasureSection& s) {
  j = ojson{{"source", s.source},
            {"entropy_lower", s.entropy_lower},
            {"entropy_upper", s.entropy_upper},
            {"hausdorff", s.hausdorff},
            {"packing", s.packing},
            {"entropy", s.entropy},
            {"fsc", {{"holds", s.fsc}, {"frequency", s.fsc_frequency}}},
            {"bsc", {{"holds", s.bsc}, {"sides", s.bsc_sides}}},
            {"msc", {{"holds", s.msc}, {"max_boundary_marginal", s.max_boundary_marginal}}},
            {"status", s.status},
            {"set_dimension_path", s.set_dimension_path}};
  if (s.local_dim) j["local_dim"] = *s.local_dim;
}
void from_json(const ojson& j, MeasureSection& s) {
  j.at("source").get_to(s.source);
  j.at("entropy_lower").get_to(s.entropy_lower);
  j.at("entropy_upper").get_to(s.entropy_upper);
  j.at("hausdorff").get_to(s.hausdorff);
  j.at("packing").get_to(s.packing);
  j.at("entropy").get_to(s.entropy);
  j.at("fsc").at("holds").get_to(s.fsc);
  j.at("fsc").at("frequency").get_to(s.fsc_frequency);
  j.at("bsc").at("holds").get_to(s.bsc);
  j.at("bsc").at("sides").get_to(s.bsc_sides);
  j.at("msc").at("holds").get_to(s.msc);
  j.at("msc").at("max_boundary_marginal").get_to(s.max_boundary_marginal);
  j.at("status").get_to(s.status);
  j.at("set_dimension_path").get_to(s.set_dimension_path);
  if (j.contains("local_dim")) s.local_dim = j.at("local_dim").get<LocalDimSummary>();
}

void to_json(ojson& j, const OracleCheck& s) {
  j = ojson{{"name", s.name}, {"passed", s.passed}, {"comparisons", s.comparisons}, {"detail", s.detail}};
}
void from_json(const ojson& j, OracleCheck& s) {
  j.at("name").get_to(s.name);
  j.at("passed").get_to(s.passed);
  j.at("comparisons").get_to(s.comparisons);
  j.at("detail").get_to(s.detail);
}

void to_json(ojson& j, const OracleSection& s) {
  j = ojson{{"max_depth", s.max_depth},
            {"pairs_depth", s.pairs_depth},
            {"passed", s.passed},
            {"checks", s.checks}};
}
void from_json(const ojson& j, OracleSection& s) {
  j.at("max_depth").get_to(s.max_depth);
  j.at("pairs_depth").get_to(s.pairs_depth);
  j.at("passed").get_to(s.passed);
  j.at("checks").get_to(s.checks);
}

namespace {

ojson report_json(const RunReport& r) {
  ojson j;
  j["command"] = r.command;
  j["construction"] = r.construction;
  if (r.dims) j["dims"] = *r.dims;
  if (r.measure) j["measure"] = *r.measure;
  if (r.oracle) j["oracle"] = *r.oracle;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void flatten(const ojson& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array()) {
    for (std::size_t idx = 0; idx < j.size(); ++idx) {
      flatten(j[idx], prefix + "." + std::to_string(idx), out);
    }
  } else {
    out += csv_field(prefix) + "," + csv_field(j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
  }
}

}  // namespace

std::string to_json(const RunReport& report) { return report_json(report).dump(2) + "\n"; }

RunReport report_from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
  }
  try {
    RunReport r;
    j.at("command").get_to(r.command);
    j.at("construction").get_to(r.construction);
    if (j.contains("dims")) r.dims = j.at("dims").get<DimsSection>();
    if (j.contains("measure")) r.measure = j.at("measure").get<MeasureSection>();
    if (j.contains("oracle")) r.oracle = j.at("oracle").get<OracleSection>();
    return r;
  } catch (const ojson::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
  }
}

std::string to_csv(const RunReport& report) {
  std::string out = "key,value\n";
  flatten(report_json(report), "", out);
  return out;
}

}  // namespace moran
