#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "sgdephase/errors.hpp"

namespace sgdephase::testing {

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline ::testing::AssertionResult throws_code(ErrorCode expected, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == expected) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure()
           << "threw " << to_string(e.code()) << " (" << e.what() << "), expected "
           << to_string(expected);
  } catch (const std::exception& e) {
    return ::testing::AssertionFailure() << "threw a foreign exception: " << e.what();
  }
  return ::testing::AssertionFailure() << "did not throw " << to_string(expected);
}

}  // namespace sgdephase::testing
