#include "moran/error.hpp"

namespace moran {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::out_of_range_digit: return "OutOfRangeDigit";
    case ErrorCode::too_few_digits: return "TooFewDigits";
    case ErrorCode::bad_base: return "BadBase";
    case ErrorCode::duplicate_digit: return "DuplicateDigit";
    case ErrorCode::empty_period: return "EmptyPeriod";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::bad_range: return "BadRange";
    case ErrorCode::window_too_small: return "WindowTooSmall";
    case ErrorCode::invalid_word: return "InvalidWord";
    case ErrorCode::invalid_square: return "InvalidSquare";
    case ErrorCode::invalid_probability: return "InvalidProbability";
    case ErrorCode::fiber_counts_not_constant: return "FiberCountsNotConstant";
    case ErrorCode::aspect_order_violated: return "AspectOrderViolated";
    case ErrorCode::guard_exceeded: return "GuardExceeded";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace moran
