#pragma once

#include <gtest/gtest.h>

#include "cgmt/errors.hpp"

// Kind of the cgmt::Error thrown by f, or a test failure if none is thrown.
template <class F>
cgmt::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const cgmt::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected cgmt::Error";
  return cgmt::ErrorKind::Numeric;
}
