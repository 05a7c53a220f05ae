// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "addgoods/arith.hpp"
#include "addgoods/model.hpp"

/**
 * Exact polynomial-time solver for instances where every pool item has unlimited
 * supply and the budget is unlimited.
 *
 * Agents are grouped by proportionality of their pool valuations. Envy inside a
 * group can only be traded through a common normalized valuation, which turns the
 * group into a system of difference constraints. Envy between non-proportional
 * agents can always be removed by handing each side the item it values relatively
 * more, without creating envy anywhere else.
 */
namespace addgoods {

/// Agents whose pool valuations are positive multiples of each other.
struct EquivalenceClass {
    std::vector<AgentIndex> members; // members.front() is the representative
    std::vector<Rational> factors;   // v_member = factor * v_representative, parallel to members
    bool is_zero_class = false;      // every member values every pool item at 0
};

/// True iff the two pool valuation vectors are positive multiples of each other,
/// or both are all-zero. Decided by exact cross products.
bool proportional_over_pool(const Instance& inst, AgentIndex a, AgentIndex b);

/// Partition of the agents; the pool-blind agents, if any, form one zero class.
std::vector<EquivalenceClass> proportional_classes(const Instance& inst);

/**
 * A non-zero class with each member's pool values divided by their gcd d_a. All
 * members share the same normalized vector; gaps are divided by d_a and rounded up.
 */
struct NormalizedClass {
    EquivalenceClass cls;
    std::vector<BigInt> divisors;          // d_a, parallel to cls.members
    std::vector<BigInt> normalized_values; // one per pool item, gcd 1
    std::vector<BigInt> gaps;              // members x members, rounded normalized initial gaps

    [[nodiscard]] std::size_t size() const { return cls.members.size(); }
    [[nodiscard]] const BigInt& gap(std::size_t i, std::size_t j) const { return gaps[i * size() + j]; }
};

/// Throws ModelError for the zero class.
NormalizedClass normalize_class(const Instance& inst, const EquivalenceClass& cls);

/// Two multisets of pool items with v'(x) = v'(y) + 1 under a gcd-1 valuation.
struct UnitBundlePair {
    std::vector<BigInt> x; // copies per pool item
    std::vector<BigInt> y;
};

UnitBundlePair unit_bundle_pair(std::span<const BigInt> normalized_values);

/// x_lhs - x_rhs >= bound over variable indices.
struct DifferenceConstraint {
    std::size_t lhs;
    std::size_t rhs;
    BigInt bound;
};

struct DifferenceConstraintSystem {
    std::vector<AgentIndex> variables;
    std::vector<DifferenceConstraint> constraints;
    std::optional<std::vector<BigInt>> solution; // nonnegative, minimum 0
};

/// Either nonnegative potentials with minimum 0 satisfying every constraint,
/// or a cycle of variable indices whose bounds sum to a positive number.
struct DifferenceSolution {
    std::vector<BigInt> potentials;
    std::vector<std::size_t> negative_cycle;

    [[nodiscard]] bool feasible() const { return negative_cycle.empty(); }
};

/// Bellman-Ford on the constraint graph (edge lhs -> rhs with weight -bound) from a virtual source.
DifferenceSolution solve_difference_constraints(std::size_t variables,
                                                std::span<const DifferenceConstraint> constraints);

struct Phase1Result {
    DifferenceConstraintSystem system;
    std::variant<Extension, NegativeCycle> outcome;

    [[nodiscard]] bool feasible() const { return std::holds_alternative<Extension>(outcome); }
};

/// Resolves all envy inside one proportional class, or proves it impossible.
Phase1Result phase1_class(const Instance& inst, const NormalizedClass& cls);

/**
 * Hands `envier` copies of the item it values relatively more and `envied` copies of
 * the other, so that the envier's gap drops to <= 0 while the envied agent sees both
 * bundles grow by the same amount.
 *
 * When the envied agent values the whole pool at 0 there is no second item: the
 * envier alone gets enough copies of its most valued item.
 */
struct NonProportionalResolution {
    AgentIndex envier = 0;
    AgentIndex envied = 0;
    ItemIndex preferred_item = 0;            // r1
    std::optional<ItemIndex> other_item;     // r2, absent when the envied agent is pool-blind
    BigInt x, c, y, d;                       // v_envier(r1), v_envier(r2), v_envied(r1), v_envied(r2)
    BigInt gap;                              // envy gap being closed
    BigInt copies_to_envier;                 // of r1
    BigInt copies_to_envied;                 // of r2

    [[nodiscard]] Extension as_extension(const Instance& inst) const;
};

/// Requires `envier` to envy `envied` under `ext`, all supplies infinite, and the pair
/// non-proportional. Throws ModelError otherwise.
NonProportionalResolution resolve_pair_nonproportional(const Instance& inst, const Extension& ext,
                                                       AgentIndex envier, AgentIndex envied);

/// Divisibility test for a proportional pair: some T in [lo, hi] divisible by d.
struct ProportionalPairCheck {
    bool feasible = false;
    BigInt lo;                 // gamma(a, b)
    BigInt hi;                 // floor(-alpha * gamma(b, a))
    BigInt divisor;            // gcd of a's pool values
    Rational alpha;            // v_a = alpha * v_b
    std::optional<BigInt> target; // smallest multiple of divisor in [lo, hi]
};

/// Requires a to envy b initially, v_a = alpha * v_b with v_a nonzero, all supplies infinite.
ProportionalPairCheck pair_proportional_feasible(const Instance& inst, AgentIndex a, AgentIndex b);

struct ProportionalResolution {
    AgentIndex envier = 0;
    AgentIndex envied = 0;
    BigInt target;
    BigInt quotient;                   // target / divisor
    std::vector<BigInt> coefficients;  // Bezout coefficients of the envier's pool values
    std::vector<BigInt> to_envier;     // b_i = max(0, q c_i)
    std::vector<BigInt> to_envied;     // b'_i = max(0, -q c_i)

    [[nodiscard]] Extension as_extension(const Instance& inst) const;
};

/// Builds the two-agent extension for a target T returned by pair_proportional_feasible.
/// Throws ModelError if T is not divisible by the gcd, std::logic_error if the result
/// leaves envy between the pair.
ProportionalResolution pair_proportional_construct(const Instance& inst, AgentIndex a, AgentIndex b,
                                                   const BigInt& target);

/// Envy-edge counts observed by phase2, one entry before each step and one at the end.
struct Phase2Trace {
    std::vector<std::size_t> edge_counts;
    std::vector<std::pair<AgentIndex, AgentIndex>> resolved;
};

/// Removes every remaining envy edge; all of them must join non-proportional agents.
Extension phase2(const Instance& inst, Extension ext, Phase2Trace* trace = nullptr);

Verdict solve_unbounded(const Instance& inst, Phase2Trace* trace = nullptr);

/// Re-derives a negative-cycle witness from the instance alone.
bool verify_negative_cycle(const Instance& inst, const NegativeCycle& witness);

} // namespace addgoods
