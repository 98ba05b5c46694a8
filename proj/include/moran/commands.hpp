#pragma once

// The CLI subcommands as functions: they never print or exit, so tests and
// the Python module can drive them directly.

#include <cstdint>
#include <filesystem>
#include <string>

#include "moran/error.hpp"
#include "moran/oracle.hpp"

namespace moran {

namespace exit_code {
constexpr int ok = 0;
constexpr int usage = 1;  // bad flags, unreadable or unwritable files
constexpr int validation = 2;
constexpr int guard = 3;
constexpr int check_failed = 4;
}  // namespace exit_code

int exit_code_for(ErrorCode code);

enum class OutputFormat { json, csv };

struct CommandResult {
  int exit_code = exit_code::ok;
  std::string out;
  std::string err;
};

struct DimsOptions {
  int window = 2000;
  int gap_limit = 400;
  int threads = 1;
  OutputFormat format = OutputFormat::json;
};

struct MeasureOptions {
  int window = 2000;
  int samples = 0;  // local-dimension samples; 0 skips sampling
  int sample_depth = 400;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::json;
};

struct OracleOptions {
  int max_depth = 6;
  int pairs_depth = 5;
  std::uint64_t guard = oracle::kDefaultGuard;
  OutputFormat format = OutputFormat::json;
  oracle::NestedCountFn nested = nested_count;
};

struct RenderOptions {
  int level = 3;
  int width = 512;
  std::string out = "-";  // "-" puts the image in CommandResult::out
  std::uint64_t guard = oracle::kDefaultGuard;
};

CommandResult cmd_validate(const std::filesystem::path& spec);
CommandResult cmd_dims(const std::filesystem::path& spec, const DimsOptions& opt);
CommandResult cmd_measure(const std::filesystem::path& spec, const MeasureOptions& opt);
CommandResult cmd_oracle(const std::filesystem::path& spec, const OracleOptions& opt);
CommandResult cmd_render(const std::filesystem::path& spec, const RenderOptions& opt);

}  // namespace moran
