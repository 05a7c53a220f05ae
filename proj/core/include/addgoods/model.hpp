// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace addgoods {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Input valuations. Inputs fit in 64 bits; everything derived from them is BigInt.
using Value = std::int64_t;
using AgentIndex = std::size_t;
using ItemIndex = std::size_t;

/// Raised when a caller-supplied instance or argument breaks a precondition.
class ModelError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a solver is asked to run on an instance outside its regime.
class ModeMismatch : public std::invalid_argument {
  public:
    explicit ModeMismatch(const std::string& what) : std::invalid_argument("mode mismatch: " + what) {}
};

/// A nonnegative count bound that may be unlimited. Used for item supplies and the budget.
class Limit {
  public:
    static Limit infinite() { return Limit{}; }
    static Limit finite(std::int64_t n);

    [[nodiscard]] bool is_infinite() const { return !bound_.has_value(); }
    [[nodiscard]] bool is_finite() const { return bound_.has_value(); }
    /// Throws std::logic_error when infinite.
    [[nodiscard]] std::int64_t value() const;

    /// Smaller of the two bounds; infinite is the identity.
    [[nodiscard]] Limit min(const Limit& other) const;

    bool operator==(const Limit&) const = default;

  private:
    Limit() = default;
    std::optional<std::int64_t> bound_;
};

std::string to_string(const Limit& limit);

struct InitialItem {
    std::string id;
    std::vector<Value> values; // indexed by agent

    bool operator==(const InitialItem&) const = default;
};

struct PoolItem {
    std::string id;
    Limit supply = Limit::infinite();
    std::vector<Value> values; // indexed by agent

    bool operator==(const PoolItem&) const = default;
};

/**
 * Agents, initial items with the fixed allocation, and the pool of items that may be
 * added. Validated on construction and immutable afterwards.
 *
 * Agent and item indices follow the input order. Item ids are unique across the
 * initial items and the pool.
 */
class Instance {
  public:
    Instance(std::vector<std::string> agents, std::vector<InitialItem> initial_items,
             std::vector<PoolItem> pool_items, std::vector<std::vector<ItemIndex>> allocation, Limit budget);

    [[nodiscard]] std::size_t agent_count() const { return agents_.size(); }
    [[nodiscard]] std::size_t pool_count() const { return pool_.size(); }
    [[nodiscard]] const std::vector<std::string>& agents() const { return agents_; }
    [[nodiscard]] const std::vector<InitialItem>& initial_items() const { return initial_; }
    [[nodiscard]] const std::vector<PoolItem>& pool_items() const { return pool_; }
    [[nodiscard]] const std::vector<std::vector<ItemIndex>>& allocation() const { return allocation_; }
    [[nodiscard]] const Limit& budget() const { return budget_; }

    [[nodiscard]] const std::string& agent_id(AgentIndex a) const { return agents_.at(a); }
    /// Throws ModelError("unknown agent: ...").
    [[nodiscard]] AgentIndex agent_index(std::string_view id) const;
    [[nodiscard]] std::optional<AgentIndex> find_agent(std::string_view id) const;
    [[nodiscard]] std::optional<ItemIndex> find_pool_item(std::string_view id) const;

    [[nodiscard]] Value pool_value(AgentIndex a, ItemIndex r) const { return pool_[r].values[a]; }
    /// v_a(sigma(b)): how much `a` values the initial bundle of `b`.
    [[nodiscard]] const BigInt& initial_bundle_value(AgentIndex a, AgentIndex b) const {
        return bundle_values_[a * agents_.size() + b];
    }
    /// Envy gap before any items are added.
    [[nodiscard]] BigInt initial_gap(AgentIndex a, AgentIndex b) const {
        return initial_bundle_value(a, b) - initial_bundle_value(a, a);
    }
    /// True when `a` values every pool item at 0.
    [[nodiscard]] bool pool_blind(AgentIndex a) const;

    [[nodiscard]] bool all_supplies_infinite() const;
    [[nodiscard]] bool all_supplies_finite() const;

    bool operator==(const Instance& other) const;

  private:
    std::vector<std::string> agents_;
    std::vector<InitialItem> initial_;
    std::vector<PoolItem> pool_;
    std::vector<std::vector<ItemIndex>> allocation_;
    Limit budget_;
    std::vector<BigInt> bundle_values_;
};

/// Copy counts rho(a, r) of pool items handed to each agent, dense agents x items.
class Extension {
  public:
    Extension() = default;
    Extension(std::size_t agents, std::size_t items);
    static Extension empty_for(const Instance& inst) { return {inst.agent_count(), inst.pool_count()}; }

    [[nodiscard]] std::size_t agent_count() const { return agents_; }
    [[nodiscard]] std::size_t item_count() const { return items_; }

    [[nodiscard]] const BigInt& count(AgentIndex a, ItemIndex r) const { return counts_[a * items_ + r]; }
    void set(AgentIndex a, ItemIndex r, BigInt n) { counts_[a * items_ + r] = std::move(n); }
    void add(AgentIndex a, ItemIndex r, const BigInt& n) { counts_[a * items_ + r] += n; }

    /// Total number of added copies.
    [[nodiscard]] BigInt size() const;
    /// Copies of `r` handed out across all agents.
    [[nodiscard]] BigInt item_total(ItemIndex r) const;
    [[nodiscard]] bool is_empty() const;

    /// Multiset union; dimensions must agree.
    Extension& operator+=(const Extension& other);
    friend Extension operator+(Extension lhs, const Extension& rhs) { return lhs += rhs; }

    bool operator==(const Extension&) const = default;

  private:
    std::size_t agents_ = 0;
    std::size_t items_ = 0;
    std::vector<BigInt> counts_;
};

/// v_a(rho, b): how much `a` values the copies that `ext` hands to `b`.
BigInt added_value(const Instance& inst, const Extension& ext, AgentIndex a, AgentIndex b);

/// gamma_rho(a, b) = v_a(sigma(b)) + v_a(rho, b) - v_a(sigma(a)) - v_a(rho, a). Positive means envy.
BigInt envy_gap(const Instance& inst, const Extension& ext, AgentIndex a, AgentIndex b);
BigInt envy_gap(const Instance& inst, const Extension& ext, std::string_view a, std::string_view b);

struct EnvyEdge {
    AgentIndex envier;
    AgentIndex envied;
    BigInt gap;

    bool operator==(const EnvyEdge&) const = default;
};

struct EnvyGraph {
    std::vector<EnvyEdge> edges; // sorted by (envier, envied)

    [[nodiscard]] bool edgeless() const { return edges.empty(); }
    [[nodiscard]] bool has_edge(AgentIndex envier, AgentIndex envied) const;
};

EnvyGraph envy_graph(const Instance& inst, const Extension& ext);

/// Checked independently of envy_graph: compares each agent's own bundle value with the others.
bool is_envy_free(const Instance& inst, const Extension& ext);

struct Violation {
    enum class Kind { dimension, negative_count, supply, budget, unknown_id };
    Kind kind;
    std::string message;
};

/// Empty result means the extension respects every supply and the budget.
std::vector<Violation> validate_extension(const Instance& inst, const Extension& ext);

/// p: the sum of all finite supplies. Infinite as soon as one supply is infinite.
Limit sum_finite_supplies(const Instance& inst);
/// Sum over the finite-supply items only, ignoring infinite ones.
std::int64_t sum_of_finite_supplies_only(const Instance& inst);

/// Raised when an exhaustive search would exceed its configured state cap.
class CapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Verdicts ------------------------------------------------------------------

struct Certificate {
    bool envy_free = false;
    bool valid = false;
    BigInt size;
};

/// An agent that values the whole pool at zero yet envies someone initially.
struct ZeroAgentEnvy {
    AgentIndex agent;
    AgentIndex envied;
    BigInt gap;
};

/// A cycle a_0 -> a_1 -> ... -> a_0 of proportional agents whose rounded normalized gaps
/// sum to a positive number, so x_{a_i} - x_{a_{i+1}} >= gap' cannot all hold.
struct NegativeCycle {
    std::vector<AgentIndex> class_members;
    std::vector<AgentIndex> cycle;
};

struct SearchExhausted {
    std::string detail;
};

using Witness = std::variant<ZeroAgentEnvy, NegativeCycle, SearchExhausted>;

struct Feasible {
    Extension extension;
    Certificate certificate;
};

struct Infeasible {
    Witness witness;
};

struct Verdict {
    std::variant<Feasible, Infeasible> outcome;
    std::string mode;

    [[nodiscard]] bool feasible() const { return std::holds_alternative<Feasible>(outcome); }
    /// Throws std::bad_variant_access on infeasible verdicts.
    [[nodiscard]] const Extension& extension() const { return std::get<Feasible>(outcome).extension; }
    [[nodiscard]] const Witness& witness() const { return std::get<Infeasible>(outcome).witness; }
};

/// Recomputes the certificate and throws std::logic_error if `ext` does not resolve all envy.
Verdict make_feasible(const Instance& inst, Extension ext, std::string mode);
Verdict make_infeasible(Witness witness, std::string mode);

Certificate certify(const Instance& inst, const Extension& ext);

} // namespace addgoods
