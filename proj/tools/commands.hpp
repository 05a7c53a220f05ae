// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "addgoods/model.hpp"

namespace addgoods::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 1; // infeasible verdict or failed check
inline constexpr int exit_error = 2;

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

struct CheckReport {
    bool passed = false;
    std::vector<std::string> lines;
};

/// What `check` does: recomputes envy-freeness and validity of a feasible verdict, or
/// re-derives the witness of an infeasible one.
CheckReport check_verdict(const Instance& inst, std::string_view verdict_text);

} // namespace addgoods::cli
