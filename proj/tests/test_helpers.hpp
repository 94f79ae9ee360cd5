#pragma once

#include <doctest.h>

#include "rydion/errors.hpp"

// Runs f and requires it to throw a rydion::Error of the given kind.
template <class F>
void expect_error(rydion::ErrorKind kind, F&& f) {
  try {
    f();
  } catch (const rydion::Error& e) {
    CHECK_MESSAGE(e.kind() == kind, "wrong error kind: ", e.what());
    return;
  } catch (const std::exception& e) {
    FAIL_CHECK("threw a non-library exception: ", e.what());
    return;
  }
  FAIL_CHECK("expected an error, got none");
}
