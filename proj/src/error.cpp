#include "leaksim/error.hpp"

namespace leaksim {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::duplicate_id: return "duplicate_id";
    case ErrorCode::dangling_parent: return "dangling_parent";
    case ErrorCode::missing_aggregate: return "missing_aggregate";
    case ErrorCode::unknown_region: return "unknown_region";
    case ErrorCode::unknown_group: return "unknown_group";
    case ErrorCode::negative_share: return "negative_share";
    case ErrorCode::share_sum: return "share_sum";
    case ErrorCode::duplicate_region: return "duplicate_region";
    case ErrorCode::unknown_source: return "unknown_source";
    case ErrorCode::mix_sum: return "mix_sum";
    case ErrorCode::ambiguous_capacity: return "ambiguous_capacity";
    case ErrorCode::missing_counterfactual: return "missing_counterfactual";
    case ErrorCode::missing_region: return "missing_region";
    case ErrorCode::not_normalized: return "not_normalized";
    case ErrorCode::weight_sum: return "weight_sum";
    case ErrorCode::no_leaves: return "no_leaves";
    case ErrorCode::negative_residual: return "negative_residual";
    case ErrorCode::empty_profitable_set: return "empty_profitable_set";
    case ErrorCode::missing_intensity: return "missing_intensity";
    case ErrorCode::no_destination: return "no_destination";
    case ErrorCode::non_positive_baseline: return "non_positive_baseline";
  }
  return "unknown";
}

}  // namespace leaksim
