#include "moran/spec_file.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace moran {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::parse_error, msg); }

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where + ": expected an integer");
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    parse_fail(where + ": integer out of range");
  }
  return static_cast<int>(x);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where + ": missing \"" + key + "\"");
  return *it;
}

std::vector<Level> parse_levels(const json& arr, const std::string& where) {
  if (!arr.is_array()) parse_fail(where + ": expected a list of levels");
  std::vector<Level> out;
  for (std::size_t idx = 0; idx < arr.size(); ++idx) {
    const std::string at = where + " level " + std::to_string(idx + 1);
    const json& lv = arr[idx];
    if (!lv.is_object()) parse_fail(at + ": expected an object");
    Level level;
    level.n = as_int(field(lv, "n", at), at + " n");
    level.m = as_int(field(lv, "m", at), at + " m");
    const json& digits = field(lv, "digits", at);
    if (!digits.is_array()) parse_fail(at + ": digits must be a list of [i,j] pairs");
    for (const json& d : digits) {
      if (!d.is_array() || d.size() != 2) parse_fail(at + ": digits must be a list of [i,j] pairs");
      level.digits.push_back({as_int(d[0], at + " digit"), as_int(d[1], at + " digit")});
    }
    out.push_back(std::move(level));
  }
  return out;
}

ProbAssignment parse_measure(const Construction& c, const json& m, bool& uniform) {
  if (!m.is_object()) parse_fail("measure: expected an object");
  const json& p = field(m, "p", "measure");
  if (p.is_string()) {
    if (p.get<std::string>() != "uniform") parse_fail("measure: p must be \"uniform\" or a list");
    uniform = true;
    return ProbAssignment::uniform(c);
  }
  if (!p.is_array()) parse_fail("measure: p must be \"uniform\" or a list");
  std::vector<std::vector<Rational>> per_level;
  for (int idx = 0; idx < c.stored_count(); ++idx) {
    per_level.emplace_back(c.stored(idx).digits.size(), Rational(0));
  }
  std::map<std::tuple<int, int, int>, bool> seen;
  for (const json& e : p) {
    if (!e.is_array() || e.size() != 5) {
      parse_fail("measure: entries are [level_index, i, j, numerator, denominator]");
    }
    const int level = as_int(e[0], "measure level_index");
    const Digit d{as_int(e[1], "measure i"), as_int(e[2], "measure j")};
    const int num = as_int(e[3], "measure numerator");
    const int den = as_int(e[4], "measure denominator");
    const std::string at = "level " + std::to_string(level);
    if (level < 1 || level > c.stored_count()) {
      throw Error(ErrorCode::invalid_probability,
                  at + ": no such level (spec has " + std::to_string(c.stored_count()) + ")");
    }
    if (den <= 0) throw Error(ErrorCode::invalid_probability, at + ": denominator must be positive");
    const Level& lv = c.stored(level - 1);
    auto it = std::lower_bound(lv.digits.begin(), lv.digits.end(), d);
    if (it == lv.digits.end() || *it != d) {
      throw Error(ErrorCode::invalid_probability, at + ": (" + std::to_string(d.i) + "," +
                                                      std::to_string(d.j) + ") is not a digit");
    }
    if (!seen.emplace(std::tuple{level, d.i, d.j}, true).second) {
      throw Error(ErrorCode::invalid_probability, at + ": (" + std::to_string(d.i) + "," +
                                                      std::to_string(d.j) + ") given twice");
    }
    per_level[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(it - lv.digits.begin())] =
        Rational(num, den);
  }
  return ProbAssignment(c, std::move(per_level));
}

nlohmann::ordered_json level_json(const Level& lv) {
  json digits = json::array();
  for (const Digit& d : lv.digits) digits.push_back({d.i, d.j});
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  out["n"] = lv.n;
  out["m"] = lv.m;
  out["digits"] = std::move(digits);
  return out;
}

}  // namespace

SpecFile parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("spec must be a JSON object");
  std::vector<Level> pre;
  if (auto it = doc.find("preperiod"); it != doc.end()) pre = parse_levels(*it, "preperiod");
  std::vector<Level> per = parse_levels(field(doc, "period", "spec"), "period");
  SpecFile spec{Construction(std::move(pre), std::move(per)), std::nullopt, false};
  if (auto it = doc.find("measure"); it != doc.end()) {
    spec.measure = parse_measure(spec.construction, *it, spec.uniform_measure);
  }
  return spec;
}

SpecFile load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string dump_spec(const Construction& c, const ProbAssignment* measure) {
  nlohmann::ordered_json doc;
  doc["preperiod"] = json::array();
  for (const Level& lv : c.preperiod()) doc["preperiod"].push_back(level_json(lv));
  doc["period"] = json::array();
  for (const Level& lv : c.period()) doc["period"].push_back(level_json(lv));
  if (measure != nullptr) {
    json entries = json::array();
    for (int idx = 0; idx < c.stored_count(); ++idx) {
      const Level& lv = c.stored(idx);
      const auto probs = measure->stored(idx);
      for (std::size_t d = 0; d < lv.digits.size(); ++d) {
        if (probs[d] == 0) continue;
        const auto num = static_cast<long long>(boost::multiprecision::numerator(probs[d]));
        const auto den = static_cast<long long>(boost::multiprecision::denominator(probs[d]));
        entries.push_back({idx + 1, lv.digits[d].i, lv.digits[d].j, num, den});
      }
    }
    doc["measure"]["p"] = std::move(entries);
  }
  return doc.dump(2) + "\n";
}

}  // namespace moran
