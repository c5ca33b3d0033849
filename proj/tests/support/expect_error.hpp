#pragma once

#include <gtest/gtest.h>

#include "leaksim/error.hpp"

namespace leaksim::testing {

/// Runs `fn` and returns the code of the leaksim::Error it throws.
template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no leaksim::Error thrown";
  return ErrorCode::io;
}

}  // namespace leaksim::testing
