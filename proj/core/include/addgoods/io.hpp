// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "addgoods/model.hpp"
#include "addgoods/oracle.hpp"

/**
 * JSON documents read and written by the command-line tool.
 *
 * Instance:
 *   {"agents": ["a1", ...],
 *    "initial_items": {"p1": {"a1": 3, ...}, ...},
 *    "pool_items": {"r1": {"supply": 2 | "inf", "values": {"a1": 1, ...}}, ...},
 *    "initial_allocation": {"a1": ["p1"], ...},
 *    "budget": 5 | "inf"}
 * Omitted valuations are 0. Unknown and duplicate keys are rejected.
 *
 * Verdict:
 *   {"feasible": bool, "extension": {"a1": {"r1": "12"}}, "size": "12",
 *    "witness": {...}, "mode": "unbounded"}
 * Counts and sizes are decimal strings because they are unbounded integers.
 *
 * Graph:
 *   {"vertices": ["x1", ...], "edges": [["x1", "x2"], ...]}
 */
namespace addgoods {

/// Malformed or schema-violating document. The message names the offending key
/// path, or the line and column for JSON syntax errors.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

std::string serialize_verdict(const Instance& inst, const Verdict& verdict);

/// A verdict file read back against the instance it claims to solve.
struct VerdictDocument {
    bool feasible = false;
    std::string mode;
    Extension extension;
    BigInt declared_size;
    /// Unknown agent or item ids found in the extension; those entries are dropped.
    std::vector<Violation> id_violations;
    std::optional<Witness> witness;
};

VerdictDocument parse_verdict(const Instance& inst, std::string_view text);

SimpleGraph parse_graph(std::string_view text);
std::string serialize_graph(const SimpleGraph& graph);

} // namespace addgoods
