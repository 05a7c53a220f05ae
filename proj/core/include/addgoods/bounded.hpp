// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "addgoods/model.hpp"

namespace addgoods {

/// Counters filled in by the search-based solvers.
struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t assignments = 0;
    /// Assignments to an agent that was not envious at that moment. The branching
    /// solver never makes one; the counter exists so tests can check that.
    std::uint64_t assignments_to_non_envious = 0;
};

/**
 * Branching over single copies: while some agent is envious, pick the envious agent
 * with the smallest id and try giving it one copy of each pool item that still has
 * supply, in pool order. Depth is bounded by min(p, k). Infinite supplies are capped
 * at k.
 */
Verdict solve_branching(const Instance& inst, std::int64_t k, SearchStats* stats = nullptr);

/// One integer variable x_a^r per (agent, pool item) with 0 <= x <= upper.
struct IlpVariable {
    AgentIndex agent;
    ItemIndex item;
    std::int64_t upper;
};

struct IlpModel {
    std::vector<IlpVariable> variables;   // (agent, item) lexicographic
    std::vector<std::int64_t> item_caps;  // supply(r), capped at the budget
    Limit budget = Limit::infinite();
};

/// Throws ModeMismatch("unbounded model") if some variable has no finite upper bound.
IlpModel build_ilp_model(const Instance& inst, const Limit& k);

/// Depth-first branch-and-bound over the bounded ILP variables, pruned on budget and
/// supply overflow and on agents that can no longer close their largest gap.
Verdict solve_ilp_bb(const Instance& inst, const Limit& k, SearchStats* stats = nullptr);

/// Unlimited budget with mixed finite and infinite supplies: every distribution of the
/// finite-supply copies is folded into the initial allocation and the remainder is
/// solved exactly over the infinite-supply items. Exponential in the finite supplies.
Verdict solve_hybrid(const Instance& inst, std::uint64_t cap = 1'000'000);

enum class Mode { automatic, unbounded, branch, ilp, hybrid };

/// Accepts "auto", "unbounded", "branch", "ilp", "hybrid"; throws ModelError otherwise.
Mode parse_mode(std::string_view text);
std::string_view to_string(Mode mode);

/// The concrete solver `auto` would pick for this instance.
Mode route(const Instance& inst);

/// Runs the requested solver. Explicit modes whose preconditions fail throw ModeMismatch.
Verdict dispatch(const Instance& inst, Mode mode = Mode::automatic);

} // namespace addgoods
