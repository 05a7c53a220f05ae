// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include "addgoods/model.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace addgoods {

Limit Limit::finite(std::int64_t n) {
    if (n < 0) {
        throw ModelError("limit must be nonnegative, got " + std::to_string(n));
    }
    Limit l;
    l.bound_ = n;
    return l;
}

std::int64_t Limit::value() const {
    if (!bound_) {
        throw std::logic_error("value() on an infinite limit");
    }
    return *bound_;
}

Limit Limit::min(const Limit& other) const {
    if (is_infinite()) {
        return other;
    }
    if (other.is_infinite()) {
        return *this;
    }
    return Limit::finite(std::min(*bound_, *other.bound_));
}

std::string to_string(const Limit& limit) {
    return limit.is_infinite() ? std::string("inf") : std::to_string(limit.value());
}

Instance::Instance(std::vector<std::string> agents, std::vector<InitialItem> initial_items,
                   std::vector<PoolItem> pool_items, std::vector<std::vector<ItemIndex>> allocation,
                   Limit budget)
    : agents_(std::move(agents)), initial_(std::move(initial_items)), pool_(std::move(pool_items)),
      allocation_(std::move(allocation)), budget_(budget) {
    const std::size_t n = agents_.size();
    if (n == 0) {
        throw ModelError("no agents");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& id : agents_) {
        if (!seen.insert(id).second) {
            throw ModelError("duplicate agent id: " + id);
        }
    }
    seen.clear();
    auto check_values = [n](const std::string& id, const std::vector<Value>& values) {
        if (values.size() != n) {
            throw ModelError("item " + id + ": expected " + std::to_string(n) + " values, got " +
                             std::to_string(values.size()));
        }
        for (Value v : values) {
            if (v < 0) {
                throw ModelError("item " + id + ": negative value");
            }
        }
    };
    for (const auto& item : initial_) {
        if (!seen.insert(item.id).second) {
            throw ModelError("duplicate item id: " + item.id);
        }
        check_values(item.id, item.values);
    }
    for (const auto& item : pool_) {
        if (!seen.insert(item.id).second) {
            throw ModelError("duplicate item id: " + item.id);
        }
        check_values(item.id, item.values);
    }

    if (allocation_.empty()) {
        allocation_.resize(n);
    }
    if (allocation_.size() != n) {
        throw ModelError("initial allocation must have one bundle per agent");
    }
    std::vector<bool> held(initial_.size(), false);
    for (const auto& bundle : allocation_) {
        for (ItemIndex i : bundle) {
            if (i >= initial_.size()) {
                throw ModelError("initial allocation references unknown item index " + std::to_string(i));
            }
            if (held[i]) {
                throw ModelError("initial item " + initial_[i].id + " is held by more than one agent");
            }
            held[i] = true;
        }
    }

    bundle_values_.assign(n * n, BigInt(0));
    for (AgentIndex a = 0; a < n; ++a) {
        for (AgentIndex b = 0; b < n; ++b) {
            BigInt total = 0;
            for (ItemIndex i : allocation_[b]) {
                total += initial_[i].values[a];
            }
            bundle_values_[a * n + b] = std::move(total);
        }
    }
}

AgentIndex Instance::agent_index(std::string_view id) const {
    if (auto a = find_agent(id)) {
        return *a;
    }
    throw ModelError("unknown agent: " + std::string(id));
}

std::optional<AgentIndex> Instance::find_agent(std::string_view id) const {
    auto it = std::find(agents_.begin(), agents_.end(), id);
    if (it == agents_.end()) {
        return std::nullopt;
    }
    return static_cast<AgentIndex>(it - agents_.begin());
}

std::optional<ItemIndex> Instance::find_pool_item(std::string_view id) const {
    for (ItemIndex r = 0; r < pool_.size(); ++r) {
        if (pool_[r].id == id) {
            return r;
        }
    }
    return std::nullopt;
}

bool Instance::pool_blind(AgentIndex a) const {
    return std::all_of(pool_.begin(), pool_.end(), [a](const PoolItem& r) { return r.values[a] == 0; });
}

bool Instance::all_supplies_infinite() const {
    return std::all_of(pool_.begin(), pool_.end(), [](const PoolItem& r) { return r.supply.is_infinite(); });
}

bool Instance::all_supplies_finite() const {
    return std::all_of(pool_.begin(), pool_.end(), [](const PoolItem& r) { return r.supply.is_finite(); });
}

bool Instance::operator==(const Instance& other) const {
    if (agents_ != other.agents_ || initial_ != other.initial_ || pool_ != other.pool_ ||
        budget_ != other.budget_ || allocation_.size() != other.allocation_.size()) {
        return false;
    }
    // Bundles are sets; order inside a bundle is not significant.
    for (std::size_t a = 0; a < allocation_.size(); ++a) {
        auto lhs = allocation_[a];
        auto rhs = other.allocation_[a];
        std::sort(lhs.begin(), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        if (lhs != rhs) {
            return false;
        }
    }
    return true;
}

Extension::Extension(std::size_t agents, std::size_t items)
    : agents_(agents), items_(items), counts_(agents * items, BigInt(0)) {}

BigInt Extension::size() const {
    BigInt total = 0;
    for (const auto& c : counts_) {
        total += c;
    }
    return total;
}

BigInt Extension::item_total(ItemIndex r) const {
    BigInt total = 0;
    for (AgentIndex a = 0; a < agents_; ++a) {
        total += count(a, r);
    }
    return total;
}

bool Extension::is_empty() const {
    return std::all_of(counts_.begin(), counts_.end(), [](const BigInt& c) { return c == 0; });
}

Extension& Extension::operator+=(const Extension& other) {
    if (agents_ != other.agents_ || items_ != other.items_) {
        throw ModelError("cannot merge extensions of different shapes");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
    return *this;
}

namespace {

void require_shape(const Instance& inst, const Extension& ext) {
    if (ext.agent_count() != inst.agent_count() || ext.item_count() != inst.pool_count()) {
        throw ModelError("extension shape does not match instance");
    }
}

void require_agent(const Instance& inst, AgentIndex a) {
    if (a >= inst.agent_count()) {
        throw ModelError("unknown agent: #" + std::to_string(a));
    }
}

} // namespace

BigInt added_value(const Instance& inst, const Extension& ext, AgentIndex a, AgentIndex b) {
    BigInt total = 0;
    for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
        const BigInt& c = ext.count(b, r);
        if (c != 0) {
            total += c * inst.pool_value(a, r);
        }
    }
    return total;
}

BigInt envy_gap(const Instance& inst, const Extension& ext, AgentIndex a, AgentIndex b) {
    require_agent(inst, a);
    require_agent(inst, b);
    require_shape(inst, ext);
    if (a == b) {
        return 0;
    }
    return inst.initial_gap(a, b) + added_value(inst, ext, a, b) - added_value(inst, ext, a, a);
}

BigInt envy_gap(const Instance& inst, const Extension& ext, std::string_view a, std::string_view b) {
    return envy_gap(inst, ext, inst.agent_index(a), inst.agent_index(b));
}

bool EnvyGraph::has_edge(AgentIndex envier, AgentIndex envied) const {
    return std::any_of(edges.begin(), edges.end(),
                       [&](const EnvyEdge& e) { return e.envier == envier && e.envied == envied; });
}

EnvyGraph envy_graph(const Instance& inst, const Extension& ext) {
    require_shape(inst, ext);
    EnvyGraph g;
    const std::size_t n = inst.agent_count();
    for (AgentIndex a = 0; a < n; ++a) {
        for (AgentIndex b = 0; b < n; ++b) {
            if (a == b) {
                continue;
            }
            BigInt gap = envy_gap(inst, ext, a, b);
            if (gap > 0) {
                g.edges.push_back({a, b, std::move(gap)});
            }
        }
    }
    return g;
}

bool is_envy_free(const Instance& inst, const Extension& ext) {
    require_shape(inst, ext);
    const std::size_t n = inst.agent_count();
    for (AgentIndex a = 0; a < n; ++a) {
        const BigInt own = inst.initial_bundle_value(a, a) + added_value(inst, ext, a, a);
        for (AgentIndex b = 0; b < n; ++b) {
            if (b != a && inst.initial_bundle_value(a, b) + added_value(inst, ext, a, b) > own) {
                return false;
            }
        }
    }
    return true;
}

std::vector<Violation> validate_extension(const Instance& inst, const Extension& ext) {
    std::vector<Violation> out;
    if (ext.agent_count() != inst.agent_count() || ext.item_count() != inst.pool_count()) {
        out.push_back({Violation::Kind::dimension, "extension shape does not match instance"});
        return out;
    }
    for (AgentIndex a = 0; a < ext.agent_count(); ++a) {
        for (ItemIndex r = 0; r < ext.item_count(); ++r) {
            if (ext.count(a, r) < 0) {
                out.push_back({Violation::Kind::negative_count,
                               "negative count for " + inst.agent_id(a) + "/" + inst.pool_items()[r].id});
            }
        }
    }
    for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
        const auto& item = inst.pool_items()[r];
        if (item.supply.is_finite() && ext.item_total(r) > item.supply.value()) {
            out.push_back({Violation::Kind::supply, "supply exceeded for " + item.id});
        }
    }
    if (inst.budget().is_finite() && ext.size() > inst.budget().value()) {
        out.push_back({Violation::Kind::budget, "budget exceeded"});
    }
    return out;
}

std::int64_t sum_of_finite_supplies_only(const Instance& inst) {
    std::int64_t total = 0;
    for (const auto& item : inst.pool_items()) {
        if (item.supply.is_finite()) {
            if (item.supply.value() > std::numeric_limits<std::int64_t>::max() - total) {
                throw std::overflow_error("sum of finite supplies exceeds 64 bits");
            }
            total += item.supply.value();
        }
    }
    return total;
}

Limit sum_finite_supplies(const Instance& inst) {
    if (!inst.all_supplies_finite()) {
        return Limit::infinite();
    }
    return Limit::finite(sum_of_finite_supplies_only(inst));
}

Certificate certify(const Instance& inst, const Extension& ext) {
    Certificate cert;
    cert.valid = validate_extension(inst, ext).empty();
    cert.envy_free = cert.valid && is_envy_free(inst, ext);
    cert.size = ext.size();
    return cert;
}

Verdict make_feasible(const Instance& inst, Extension ext, std::string mode) {
    Certificate cert = certify(inst, ext);
    if (!cert.valid || !cert.envy_free) {
        throw std::logic_error("solver '" + mode + "' produced an extension that does not resolve envy");
    }
    return Verdict{Feasible{std::move(ext), std::move(cert)}, std::move(mode)};
}

Verdict make_infeasible(Witness witness, std::string mode) {
    return Verdict{Infeasible{std::move(witness)}, std::move(mode)};
}

} // namespace addgoods
