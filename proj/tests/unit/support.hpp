#pragma once

#include "bcsgap/errors.hpp"

#include <gtest/gtest.h>

/// Fails unless fn throws bcsgap::Error with the given code.
template <class Fn>
void expect_code(bcsgap::ErrorCode code, Fn&& fn) {
    try {
        fn();
        ADD_FAILURE() << "expected " << bcsgap::to_string(code);
    } catch (const bcsgap::Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}
