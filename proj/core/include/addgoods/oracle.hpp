// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "addgoods/model.hpp"

namespace addgoods {

inline constexpr std::uint64_t default_enumeration_cap = 1'000'000;

/**
 * Ground truth for the bounded solvers: enumerates every valid extension of size at
 * most k, smallest sizes first and lexicographically over (agent, item) slots within
 * a size, and returns the first envy-free one. The returned extension therefore has
 * minimum size. Throws CapExceeded ("instance too large for oracle") when the number
 * of candidate multisets exceeds `cap`.
 */
Verdict oracle_bounded(const Instance& inst, std::int64_t k, std::uint64_t cap = default_enumeration_cap);

/// Undirected simple graph; also the CLI graph file format.
struct SimpleGraph {
    std::vector<std::string> vertices;
    std::vector<std::pair<std::string, std::string>> edges;

    /// Throws ModelError on self-loops, duplicate vertices or edges, and unknown endpoints.
    void validate() const;
    [[nodiscard]] bool adjacent(std::size_t u, std::size_t v) const;
    [[nodiscard]] std::size_t index_of(const std::string& vertex) const;

    static SimpleGraph complete(std::size_t n);
    static SimpleGraph cycle(std::size_t n);
    static SimpleGraph path(std::size_t n);
};

struct BinPackingInput {
    std::vector<std::int64_t> sizes; // u_1..u_n, positive
    std::int64_t bins = 0;           // l
    std::int64_t bin_size = 0;       // B

    /// Throws ModelError unless sizes are positive and sum to bins * bin_size.
    void validate() const;
};

/// Vertex agents, edge agents and an extra agent; three pool items with supplies
/// C(l,2), |E| - C(l,2) and l. Feasible iff g has a clique of size l.
Instance gen_clique(const SimpleGraph& g, std::int64_t l);

/// l+1 agents with identical valuations, one holding an item worth B; one pool item
/// per integer with supply 1. Feasible iff the integers pack exactly into the bins.
Instance gen_binpacking(const BinPackingInput& bp);

/// Edge agents and a selection agent, one pool item per vertex, budget and supplies l.
/// Feasible iff g has an independent set of size l.
Instance gen_indset(const SimpleGraph& g, std::int64_t l);

enum class SupplyProfile { infinite, finite, mixed };

struct RandomInstanceOptions {
    std::size_t agents = 3;
    std::size_t pool = 2;
    std::int64_t max_value = 10;
    SupplyProfile supply = SupplyProfile::infinite;
    std::int64_t max_supply = 3;      // finite supplies are drawn from [0, max_supply]
    Limit budget = Limit::infinite();
    std::size_t initial_items = 0;    // 0 means one per agent
    std::int64_t max_initial_value = 0; // 0 means max_value
    bool binary = false;              // pool values in {0, 1}
    std::size_t proportional_group = 0; // first k agents get proportional pool valuations
    std::uint64_t seed = 0;
};

/// Deterministic for a fixed options/seed pair. Agents are a1..an, initial items p1.., pool items r1...
Instance gen_random(const RandomInstanceOptions& options);

/// Exhaustive subset checks; throw CapExceeded when C(|V|, l) exceeds `cap`.
bool graph_has_clique(const SimpleGraph& g, std::int64_t l, std::uint64_t cap = default_enumeration_cap);
bool graph_has_independent_set(const SimpleGraph& g, std::int64_t l,
                               std::uint64_t cap = default_enumeration_cap);

/// Exhaustive search for an assignment of the integers filling every bin exactly.
bool binpacking_exact_fit(const BinPackingInput& bp, std::uint64_t cap = default_enumeration_cap);

} // namespace addgoods
