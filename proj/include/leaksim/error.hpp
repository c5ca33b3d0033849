#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leaksim {

enum class ErrorCode {
  io,
  parse,
  invalid_argument,
  duplicate_id,
  dangling_parent,
  missing_aggregate,
  unknown_region,
  unknown_group,
  negative_share,
  share_sum,
  duplicate_region,
  unknown_source,
  mix_sum,
  ambiguous_capacity,
  missing_counterfactual,
  missing_region,
  not_normalized,
  weight_sum,
  no_leaves,
  negative_residual,
  empty_profitable_set,
  missing_intensity,
  no_destination,
  non_positive_baseline,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure the library reports. The code lets callers (CLI exit codes,
/// HTTP status mapping, tests) branch without matching message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace leaksim
