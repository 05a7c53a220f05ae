// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include "addgoods/bounded.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "addgoods/unbounded.hpp"

namespace addgoods {

namespace {

// Bundle values seen by every agent, updated incrementally as copies are handed out.
class BundleTable {
  public:
    explicit BundleTable(const Instance& inst)
        : inst_(inst), n_(inst.agent_count()), values_(n_ * n_), ext_(Extension::empty_for(inst)) {
        for (AgentIndex a = 0; a < n_; ++a) {
            for (AgentIndex b = 0; b < n_; ++b) {
                values_[a * n_ + b] = inst.initial_bundle_value(a, b);
            }
        }
    }

    void give(AgentIndex to, ItemIndex r, std::int64_t copies) {
        if (copies == 0) {
            return;
        }
        for (AgentIndex a = 0; a < n_; ++a) {
            values_[a * n_ + to] += BigInt(inst_.pool_value(a, r)) * copies;
        }
        ext_.add(to, r, copies);
    }

    // a's view of b's bundle minus a's view of its own
    [[nodiscard]] BigInt gap(AgentIndex a, AgentIndex b) const { return values_[a * n_ + b] - values_[a * n_ + a]; }

    [[nodiscard]] BigInt largest_gap(AgentIndex a) const {
        BigInt best = 0;
        for (AgentIndex b = 0; b < n_; ++b) {
            if (b != a) {
                best = std::max(best, gap(a, b));
            }
        }
        return best;
    }

    [[nodiscard]] bool envious(AgentIndex a) const {
        for (AgentIndex b = 0; b < n_; ++b) {
            if (b != a && values_[a * n_ + b] > values_[a * n_ + a]) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool envy_free() const {
        for (AgentIndex a = 0; a < n_; ++a) {
            if (envious(a)) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] const Extension& extension() const { return ext_; }

  private:
    const Instance& inst_;
    std::size_t n_;
    std::vector<BigInt> values_;
    Extension ext_;
};

std::vector<AgentIndex> agents_by_id(const Instance& inst) {
    std::vector<AgentIndex> order(inst.agent_count());
    std::iota(order.begin(), order.end(), AgentIndex{0});
    std::sort(order.begin(), order.end(),
              [&](AgentIndex lhs, AgentIndex rhs) { return inst.agent_id(lhs) < inst.agent_id(rhs); });
    return order;
}

class Brancher {
  public:
    Brancher(const Instance& inst, std::int64_t k, SearchStats* stats)
        : inst_(inst), order_(agents_by_id(inst)), table_(inst), stats_(stats) {
        for (const auto& item : inst.pool_items()) {
            remaining_.push_back(item.supply.is_finite() ? std::min(item.supply.value(), k) : k);
        }
    }

    bool search(std::int64_t budget_left) {
        count(&SearchStats::nodes);
        auto it = std::find_if(order_.begin(), order_.end(), [&](AgentIndex a) { return table_.envious(a); });
        if (it == order_.end()) {
            return true;
        }
        if (budget_left == 0) {
            return false;
        }
        const AgentIndex agent = *it;
        for (ItemIndex r = 0; r < inst_.pool_count(); ++r) {
            if (remaining_[r] == 0) {
                continue;
            }
            count(&SearchStats::assignments);
            if (!table_.envious(agent)) {
                count(&SearchStats::assignments_to_non_envious);
            }
            --remaining_[r];
            table_.give(agent, r, 1);
            if (search(budget_left - 1)) {
                return true;
            }
            table_.give(agent, r, -1);
            ++remaining_[r];
        }
        return false;
    }

    [[nodiscard]] const Extension& extension() const { return table_.extension(); }

  private:
    void count(std::uint64_t SearchStats::*field) {
        if (stats_) {
            ++(stats_->*field);
        }
    }

    const Instance& inst_;
    std::vector<AgentIndex> order_;
    std::vector<std::int64_t> remaining_;
    BundleTable table_;
    SearchStats* stats_;
};

class IlpSearch {
  public:
    IlpSearch(const Instance& inst, IlpModel model, SearchStats* stats)
        : inst_(inst), model_(std::move(model)), table_(inst), used_(inst.pool_count(), 0), stats_(stats) {}

    bool search(std::size_t next) {
        if (stats_) {
            ++stats_->nodes;
        }
        // Undecided variables default to 0, so an envy-free partial assignment is a solution.
        if (table_.envy_free()) {
            return true;
        }
        if (next == model_.variables.size() || prune(next)) {
            return false;
        }
        const IlpVariable& var = model_.variables[next];
        std::int64_t upper = std::min(var.upper, model_.item_caps[var.item] - used_[var.item]);
        if (model_.budget.is_finite()) {
            upper = std::min(upper, model_.budget.value() - used_total_);
        }
        for (std::int64_t value = 0; value <= upper; ++value) {
            if (value > 0) {
                if (stats_) {
                    ++stats_->assignments;
                }
                table_.give(var.agent, var.item, 1);
                ++used_[var.item];
                ++used_total_;
            }
            if (search(next + 1)) {
                return true;
            }
        }
        table_.give(var.agent, var.item, -upper);
        used_[var.item] -= upper;
        used_total_ -= upper;
        return false;
    }

    [[nodiscard]] const Extension& extension() const { return table_.extension(); }

  private:
    // An envious agent that cannot close its largest gap with the copies still open to it.
    bool prune(std::size_t next) {
        for (AgentIndex a = 0; a < inst_.agent_count(); ++a) {
            BigInt needed = table_.largest_gap(a);
            if (needed <= 0) {
                continue;
            }
            std::vector<std::pair<Value, std::int64_t>> open; // (value to a, copies still available)
            for (std::size_t v = next; v < model_.variables.size(); ++v) {
                const IlpVariable& var = model_.variables[v];
                if (var.agent != a || inst_.pool_value(a, var.item) == 0) {
                    continue;
                }
                std::int64_t avail = std::min(var.upper, model_.item_caps[var.item] - used_[var.item]);
                if (avail > 0) {
                    open.emplace_back(inst_.pool_value(a, var.item), avail);
                }
            }
            std::sort(open.begin(), open.end(), std::greater<>());
            BigInt reachable = 0;
            std::int64_t slots = model_.budget.is_finite() ? model_.budget.value() - used_total_
                                                           : std::numeric_limits<std::int64_t>::max();
            for (const auto& [value, avail] : open) {
                const std::int64_t take = std::min(avail, slots);
                reachable += BigInt(value) * take;
                slots -= take;
                if (slots == 0) {
                    break;
                }
            }
            if (reachable < needed) {
                return true;
            }
        }
        return false;
    }

    const Instance& inst_;
    IlpModel model_;
    BundleTable table_;
    std::vector<std::int64_t> used_;
    std::int64_t used_total_ = 0;
    SearchStats* stats_;
};

BigInt binomial(std::int64_t n, std::int64_t k) {
    BigInt out = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

class HybridSearch {
  public:
    explicit HybridSearch(const Instance& inst) : inst_(inst), counts_(Extension::empty_for(inst)) {
        for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
            (inst.pool_items()[r].supply.is_finite() ? finite_ : infinite_).push_back(r);
        }
    }

    [[nodiscard]] BigInt combinations() const {
        BigInt total = 1;
        const auto n = static_cast<std::int64_t>(inst_.agent_count());
        for (ItemIndex r : finite_) {
            // distributions of at most s copies over n agents
            total *= binomial(inst_.pool_items()[r].supply.value() + n, n);
        }
        return total;
    }

    std::optional<Extension> search() { return over_items(0); }

  private:
    std::optional<Extension> over_items(std::size_t f) {
        if (f == finite_.size()) {
            return solve_residual();
        }
        return over_agents(f, 0, inst_.pool_items()[finite_[f]].supply.value());
    }

    std::optional<Extension> over_agents(std::size_t f, AgentIndex a, std::int64_t left) {
        if (a == inst_.agent_count()) {
            return over_items(f + 1);
        }
        const ItemIndex r = finite_[f];
        for (std::int64_t c = 0; c <= left; ++c) {
            counts_.set(a, r, c);
            if (auto found = over_agents(f, a + 1, left - c)) {
                return found;
            }
        }
        counts_.set(a, r, 0);
        return std::nullopt;
    }

    std::optional<Extension> solve_residual() {
        const std::size_t n = inst_.agent_count();
        std::vector<InitialItem> initial = inst_.initial_items();
        std::vector<std::vector<ItemIndex>> allocation = inst_.allocation();
        for (ItemIndex r : finite_) {
            const PoolItem& item = inst_.pool_items()[r];
            for (AgentIndex holder = 0; holder < n; ++holder) {
                const BigInt& copies = counts_.count(holder, r);
                if (copies == 0) {
                    continue;
                }
                InitialItem folded{"~" + item.id + "@" + inst_.agent_id(holder), {}};
                for (AgentIndex a = 0; a < n; ++a) {
                    BigInt v = copies * item.values[a];
                    if (v > std::numeric_limits<Value>::max()) {
                        throw std::overflow_error("folded item value exceeds 64 bits");
                    }
                    folded.values.push_back(static_cast<Value>(v));
                }
                allocation[holder].push_back(initial.size());
                initial.push_back(std::move(folded));
            }
        }
        std::vector<PoolItem> pool;
        for (ItemIndex r : infinite_) {
            pool.push_back(inst_.pool_items()[r]);
        }
        const Instance residual(inst_.agents(), std::move(initial), std::move(pool), std::move(allocation),
                                Limit::infinite());
        const Verdict v = solve_unbounded(residual);
        if (!v.feasible()) {
            return std::nullopt;
        }
        Extension full = counts_;
        for (AgentIndex a = 0; a < n; ++a) {
            for (std::size_t i = 0; i < infinite_.size(); ++i) {
                full.add(a, infinite_[i], v.extension().count(a, i));
            }
        }
        return full;
    }

    const Instance& inst_;
    std::vector<ItemIndex> finite_;
    std::vector<ItemIndex> infinite_;
    Extension counts_;
};

} // namespace

Verdict solve_branching(const Instance& inst, std::int64_t k, SearchStats* stats) {
    if (k < 0) {
        throw ModelError("budget must be nonnegative");
    }
    if (inst.budget().is_finite()) {
        k = std::min(k, inst.budget().value());
    }
    Brancher brancher(inst, k, stats);
    if (brancher.search(k)) {
        return make_feasible(inst, brancher.extension(), "branch");
    }
    return make_infeasible(SearchExhausted{"no envy-resolving extension of size <= " + std::to_string(k)}, "branch");
}

IlpModel build_ilp_model(const Instance& inst, const Limit& k) {
    IlpModel model;
    model.budget = k.min(inst.budget());
    for (const auto& item : inst.pool_items()) {
        const Limit cap = item.supply.min(model.budget);
        if (cap.is_infinite()) {
            throw ModeMismatch("unbounded model: item " + item.id + " has no finite upper bound");
        }
        model.item_caps.push_back(cap.value());
    }
    for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
        for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
            model.variables.push_back({a, r, model.item_caps[r]});
        }
    }
    return model;
}

Verdict solve_ilp_bb(const Instance& inst, const Limit& k, SearchStats* stats) {
    IlpModel model = build_ilp_model(inst, k);
    const std::string bound = to_string(model.budget);
    IlpSearch search(inst, std::move(model), stats);
    if (search.search(0)) {
        return make_feasible(inst, search.extension(), "ilp");
    }
    return make_infeasible(SearchExhausted{"no feasible assignment with budget " + bound}, "ilp");
}

Verdict solve_hybrid(const Instance& inst, std::uint64_t cap) {
    if (inst.budget().is_finite()) {
        throw ModeMismatch("hybrid mode needs an infinite budget");
    }
    if (inst.all_supplies_finite()) {
        throw ModeMismatch("hybrid mode needs at least one infinite-supply item");
    }
    HybridSearch search(inst);
    const BigInt combos = search.combinations();
    if (combos > cap) {
        throw CapExceeded("hybrid enumeration needs " + combos.str() + " combinations, cap is " +
                          std::to_string(cap));
    }
    if (auto ext = search.search()) {
        return make_feasible(inst, std::move(*ext), "hybrid");
    }
    return make_infeasible(SearchExhausted{"no distribution of the finite-supply copies can be completed"},
                           "hybrid");
}

Mode parse_mode(std::string_view text) {
    if (text == "auto") {
        return Mode::automatic;
    }
    if (text == "unbounded") {
        return Mode::unbounded;
    }
    if (text == "branch") {
        return Mode::branch;
    }
    if (text == "ilp") {
        return Mode::ilp;
    }
    if (text == "hybrid") {
        return Mode::hybrid;
    }
    throw ModelError("unknown mode: " + std::string(text));
}

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::automatic:
        return "auto";
    case Mode::unbounded:
        return "unbounded";
    case Mode::branch:
        return "branch";
    case Mode::ilp:
        return "ilp";
    case Mode::hybrid:
        return "hybrid";
    }
    return "?";
}

Mode route(const Instance& inst) {
    if (inst.budget().is_finite() || inst.all_supplies_finite()) {
        return Mode::branch;
    }
    if (inst.all_supplies_infinite()) {
        return Mode::unbounded;
    }
    return Mode::hybrid;
}

Verdict dispatch(const Instance& inst, Mode mode) {
    if (mode == Mode::automatic) {
        mode = route(inst);
    }
    switch (mode) {
    case Mode::unbounded:
        return solve_unbounded(inst);
    case Mode::branch:
        if (inst.budget().is_finite()) {
            return solve_branching(inst, inst.budget().value());
        }
        if (!inst.all_supplies_finite()) {
            throw ModeMismatch("branching needs a finite budget or all-finite supplies");
        }
        // Without a budget no extension can use more than p copies.
        return solve_branching(inst, sum_of_finite_supplies_only(inst));
    case Mode::ilp:
        return solve_ilp_bb(inst, inst.budget());
    case Mode::hybrid:
        return solve_hybrid(inst);
    case Mode::automatic:
        break;
    }
    throw std::logic_error("unreachable dispatch mode");
}

} // namespace addgoods
