#pragma once

// Spec file format (JSON, UTF-8):
//
//   {
//     "preperiod": [ {"n": 3, "m": 2, "digits": [[0,0],[1,1]]}, ... ],
//     "period":    [ {"n": 3, "m": 2, "digits": [[0,0],[1,1],[2,0]]} ],
//     "measure":   {"p": "uniform"}
//   }
//
// "preperiod" may be omitted. "measure" is optional; its "p" is either the
// string "uniform" or a list of [level_index, i, j, numerator, denominator]
// entries, where level_index counts the preperiod levels first and then the
// period levels, starting at 1. Digits without an entry get probability 0.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "moran/construction.hpp"
#include "moran/measure.hpp"

namespace moran {

struct SpecFile {
  Construction construction;
  std::optional<ProbAssignment> measure;
  bool uniform_measure = false;
};

SpecFile parse_spec(std::string_view text);
SpecFile load_spec(const std::filesystem::path& path);

/// Inverse of parse_spec; explicit probabilities are written as entries.
std::string dump_spec(const Construction& c, const ProbAssignment* measure = nullptr);

}  // namespace moran
