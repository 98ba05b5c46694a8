#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace moran {

enum class ErrorCode {
  out_of_range_digit,
  too_few_digits,
  bad_base,
  duplicate_digit,
  empty_period,
  domain_error,
  bad_range,
  window_too_small,
  invalid_word,
  invalid_square,
  invalid_probability,
  fiber_counts_not_constant,
  aspect_order_violated,
  guard_exceeded,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code selects the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace moran
