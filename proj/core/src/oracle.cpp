// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include "addgoods/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace addgoods {

namespace {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    BigInt out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

class OracleEnumerator {
  public:
    OracleEnumerator(const Instance& inst, std::int64_t k)
        : inst_(inst), k_(k), slots_(inst.agent_count() * inst.pool_count()), ext_(Extension::empty_for(inst)),
          used_(inst.pool_count(), 0) {}

    // Multisets of exactly `size` slots, chosen in nondecreasing slot order.
    bool enumerate(std::int64_t size, std::size_t first_slot) {
        if (size == 0) {
            return is_envy_free(inst_, ext_);
        }
        for (std::size_t slot = first_slot; slot < slots_; ++slot) {
            const AgentIndex a = slot / inst_.pool_count();
            const ItemIndex r = slot % inst_.pool_count();
            const Limit& supply = inst_.pool_items()[r].supply;
            if (supply.is_finite() && used_[r] >= supply.value()) {
                continue;
            }
            ++used_[r];
            ext_.add(a, r, 1);
            if (enumerate(size - 1, slot)) {
                return true;
            }
            ext_.add(a, r, -1);
            --used_[r];
        }
        return false;
    }

    std::optional<Extension> run() {
        for (std::int64_t size = 0; size <= k_; ++size) {
            if (enumerate(size, 0)) {
                return ext_;
            }
            if (slots_ == 0) {
                break;
            }
        }
        return std::nullopt;
    }

  private:
    const Instance& inst_;
    std::int64_t k_;
    std::size_t slots_;
    Extension ext_;
    std::vector<std::int64_t> used_;
};

std::string edge_label(const std::string& u, const std::string& v) { return u + "_" + v; }

template <typename Keep>
bool some_subset(std::size_t n, std::int64_t l, std::uint64_t cap, Keep&& keep) {
    if (l <= 0) {
        return true;
    }
    const auto size = static_cast<std::size_t>(l);
    if (size > n) {
        return false;
    }
    if (binomial(n, size) > cap) {
        throw CapExceeded("subset enumeration exceeds cap");
    }
    std::vector<std::size_t> pick(size);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
        if (keep(pick)) {
            return true;
        }
        // next combination in lexicographic order
        std::size_t i = size;
        while (i > 0 && pick[i - 1] == n - size + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return false;
        }
        ++pick[i - 1];
        for (std::size_t j = i; j < size; ++j) {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

} // namespace

Verdict oracle_bounded(const Instance& inst, std::int64_t k, std::uint64_t cap) {
    if (k < 0) {
        throw ModelError("budget must be nonnegative");
    }
    if (inst.budget().is_finite()) {
        k = std::min(k, inst.budget().value());
    }
    const std::uint64_t slots = inst.agent_count() * inst.pool_count();
    // multisets of size <= k over `slots` elements
    const BigInt states = slots == 0 ? BigInt(1) : binomial(slots + static_cast<std::uint64_t>(k), slots);
    if (states > cap) {
        throw CapExceeded("instance too large for oracle: " + states.str() + " candidate extensions, cap " +
                          std::to_string(cap));
    }
    OracleEnumerator enumerator(inst, k);
    if (auto ext = enumerator.run()) {
        return make_feasible(inst, std::move(*ext), "oracle");
    }
    return make_infeasible(SearchExhausted{"enumerated every extension of size <= " + std::to_string(k)}, "oracle");
}

void SimpleGraph::validate() const {
    std::set<std::string> seen(vertices.begin(), vertices.end());
    if (seen.size() != vertices.size()) {
        throw ModelError("duplicate vertex id");
    }
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& [u, v] : edges) {
        if (!seen.count(u) || !seen.count(v)) {
            throw ModelError("edge references unknown vertex: " + u + "-" + v);
        }
        if (u == v) {
            throw ModelError("self-loop at " + u);
        }
        if (!pairs.insert(std::minmax(u, v)).second) {
            throw ModelError("duplicate edge " + u + "-" + v);
        }
    }
}

std::size_t SimpleGraph::index_of(const std::string& vertex) const {
    auto it = std::find(vertices.begin(), vertices.end(), vertex);
    if (it == vertices.end()) {
        throw ModelError("unknown vertex: " + vertex);
    }
    return static_cast<std::size_t>(it - vertices.begin());
}

bool SimpleGraph::adjacent(std::size_t u, std::size_t v) const {
    const auto& a = vertices.at(u);
    const auto& b = vertices.at(v);
    return std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
        return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
}

SimpleGraph SimpleGraph::complete(std::size_t n) {
    SimpleGraph g;
    for (std::size_t i = 0; i < n; ++i) {
        g.vertices.push_back("x" + std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            g.edges.emplace_back(g.vertices[i], g.vertices[j]);
        }
    }
    return g;
}

SimpleGraph SimpleGraph::path(std::size_t n) {
    SimpleGraph g;
    for (std::size_t i = 0; i < n; ++i) {
        g.vertices.push_back("x" + std::to_string(i + 1));
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        g.edges.emplace_back(g.vertices[i], g.vertices[i + 1]);
    }
    return g;
}

SimpleGraph SimpleGraph::cycle(std::size_t n) {
    SimpleGraph g = path(n);
    if (n >= 3) {
        g.edges.emplace_back(g.vertices.back(), g.vertices.front());
    }
    return g;
}

void BinPackingInput::validate() const {
    if (bins < 1 || bin_size < 0) {
        throw ModelError("bin packing needs at least one bin and a nonnegative bin size");
    }
    BigInt total = 0;
    for (auto u : sizes) {
        if (u <= 0) {
            throw ModelError("bin packing sizes must be positive");
        }
        total += u;
    }
    if (total != BigInt(bins) * bin_size) {
        throw ModelError("bin packing sizes must sum to bins * bin_size");
    }
}

Instance gen_clique(const SimpleGraph& g, std::int64_t l) {
    g.validate();
    if (l < 2) {
        throw ModelError("clique size must be at least 2");
    }
    const std::int64_t pairs = l * (l - 1) / 2;
    const auto edge_count = static_cast<std::int64_t>(g.edges.size());
    if (pairs > edge_count) {
        throw ModelError("C(l,2) exceeds the number of edges");
    }

    const std::size_t nv = g.vertices.size();
    const std::size_t ne = g.edges.size();
    std::vector<std::string> agents;
    for (const auto& v : g.vertices) {
        agents.push_back("v_" + v);
    }
    for (const auto& [u, v] : g.edges) {
        agents.push_back("e_" + edge_label(u, v));
    }
    agents.push_back("b");
    const std::size_t n = agents.size();
    const AgentIndex extra = n - 1;
    auto edge_agent = [nv](std::size_t e) { return nv + e; };

    std::vector<InitialItem> initial;
    std::vector<std::vector<ItemIndex>> allocation(n);

    InitialItem held_by_extra{"p_b", std::vector<Value>(n, 0)};
    held_by_extra.values[extra] = 1;
    for (std::size_t e = 0; e < ne; ++e) {
        held_by_extra.values[edge_agent(e)] = 1;
    }
    allocation[extra].push_back(initial.size());
    initial.push_back(std::move(held_by_extra));

    for (std::size_t v = 0; v < nv; ++v) {
        InitialItem own{"p_" + g.vertices[v], std::vector<Value>(n, 0)};
        own.values[v] = 1;
        allocation[v].push_back(initial.size());
        initial.push_back(std::move(own));
    }
    for (std::size_t e = 0; e < ne; ++e) {
        const auto& [u, v] = g.edges[e];
        InitialItem item{"p_" + edge_label(u, v), std::vector<Value>(n, 0)};
        item.values[g.index_of(u)] = 1;
        item.values[g.index_of(v)] = 1;
        allocation[edge_agent(e)].push_back(initial.size());
        initial.push_back(std::move(item));
    }

    PoolItem shared{"r", Limit::finite(pairs), std::vector<Value>(n, 0)};
    PoolItem edge_only{"r_prime", Limit::finite(edge_count - pairs), std::vector<Value>(n, 0)};
    PoolItem vertex_only{"r_star", Limit::finite(l), std::vector<Value>(n, 0)};
    for (std::size_t v = 0; v < nv; ++v) {
        shared.values[v] = 1;
        vertex_only.values[v] = 1;
    }
    for (std::size_t e = 0; e < ne; ++e) {
        shared.values[edge_agent(e)] = 1;
        edge_only.values[edge_agent(e)] = 1;
    }
    return Instance(std::move(agents), std::move(initial), {shared, edge_only, vertex_only}, std::move(allocation),
                    Limit::infinite());
}

Instance gen_binpacking(const BinPackingInput& bp) {
    bp.validate();
    std::vector<std::string> agents;
    for (std::int64_t i = 1; i <= bp.bins; ++i) {
        agents.push_back("a" + std::to_string(i));
    }
    agents.push_back("b");
    const std::size_t n = agents.size();
    std::vector<InitialItem> initial{{"p", std::vector<Value>(n, bp.bin_size)}};
    std::vector<std::vector<ItemIndex>> allocation(n);
    allocation[n - 1].push_back(0);
    std::vector<PoolItem> pool;
    for (std::size_t j = 0; j < bp.sizes.size(); ++j) {
        pool.push_back({"r" + std::to_string(j + 1), Limit::finite(1), std::vector<Value>(n, bp.sizes[j])});
    }
    return Instance(std::move(agents), std::move(initial), std::move(pool), std::move(allocation), Limit::infinite());
}

Instance gen_indset(const SimpleGraph& g, std::int64_t l) {
    g.validate();
    if (l < 1) {
        throw ModelError("independent set size must be at least 1");
    }
    if (g.edges.empty()) {
        throw ModelError("independent set reduction needs at least one edge");
    }
    const std::size_t ne = g.edges.size();
    std::vector<std::string> agents;
    for (const auto& [u, v] : g.edges) {
        agents.push_back("e_" + edge_label(u, v));
    }
    agents.push_back("b");
    const std::size_t n = agents.size();
    const AgentIndex selector = n - 1;

    std::vector<InitialItem> initial;
    std::vector<std::vector<ItemIndex>> allocation(n);
    for (std::size_t e = 0; e < ne; ++e) {
        const std::string label = edge_label(g.edges[e].first, g.edges[e].second);
        for (std::int64_t i = 1; i < l; ++i) {
            InitialItem filler{"t1_" + label + "_" + std::to_string(i), std::vector<Value>(n, 0)};
            filler.values[selector] = 1;
            allocation[e].push_back(initial.size());
            initial.push_back(std::move(filler));
        }
        // approved by the selector and by every edge agent
        InitialItem marker{"t2_" + label, std::vector<Value>(n, 1)};
        allocation[e].push_back(initial.size());
        initial.push_back(std::move(marker));
    }

    std::vector<PoolItem> pool;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        PoolItem item{"r_" + g.vertices[v], Limit::finite(l), std::vector<Value>(n, 0)};
        item.values[selector] = 1;
        for (std::size_t e = 0; e < ne; ++e) {
            if (g.edges[e].first == g.vertices[v] || g.edges[e].second == g.vertices[v]) {
                item.values[e] = 1;
            }
        }
        pool.push_back(std::move(item));
    }
    return Instance(std::move(agents), std::move(initial), std::move(pool), std::move(allocation), Limit::finite(l));
}

Instance gen_random(const RandomInstanceOptions& opt) {
    if (opt.agents == 0 || opt.max_value < 0 || opt.max_supply < 0) {
        throw ModelError("random instance needs at least one agent and nonnegative bounds");
    }
    std::mt19937_64 rng(opt.seed);
    auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    const std::size_t n = opt.agents;
    const std::int64_t top = opt.binary ? 1 : opt.max_value;

    std::vector<std::string> agents;
    for (std::size_t a = 0; a < n; ++a) {
        agents.push_back("a" + std::to_string(a + 1));
    }

    std::vector<PoolItem> pool(opt.pool);
    for (std::size_t r = 0; r < opt.pool; ++r) {
        pool[r].id = "r" + std::to_string(r + 1);
        pool[r].values.resize(n);
        for (auto& v : pool[r].values) {
            v = uniform(0, top);
        }
    }

    const std::size_t group = std::min(opt.proportional_group, n);
    if (group > 0 && opt.pool > 0) {
        std::vector<Value> base(opt.pool);
        for (auto& v : base) {
            v = uniform(0, top);
        }
        if (std::all_of(base.begin(), base.end(), [](Value v) { return v == 0; })) {
            base[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(opt.pool) - 1))] = std::max<Value>(top, 1);
        }
        for (std::size_t a = 0; a < group; ++a) {
            const Value factor = opt.binary ? 1 : uniform(1, 3);
            for (std::size_t r = 0; r < opt.pool; ++r) {
                pool[r].values[a] = base[r] * factor;
            }
        }
    }

    for (std::size_t r = 0; r < opt.pool; ++r) {
        bool finite = false;
        switch (opt.supply) {
        case SupplyProfile::infinite:
            finite = false;
            break;
        case SupplyProfile::finite:
            finite = true;
            break;
        case SupplyProfile::mixed:
            // item 1 always infinite and item 2 always finite when there are two or more
            finite = r == 0 ? false : (r == 1 ? true : uniform(0, 1) == 1);
            break;
        }
        pool[r].supply = finite ? Limit::finite(uniform(0, opt.max_supply)) : Limit::infinite();
    }

    const std::size_t initial_count = opt.initial_items == 0 ? n : opt.initial_items;
    const std::int64_t initial_top = opt.max_initial_value == 0 ? std::max<std::int64_t>(opt.max_value, 1)
                                                                : opt.max_initial_value;
    std::vector<InitialItem> initial(initial_count);
    std::vector<std::vector<ItemIndex>> allocation(n);
    for (std::size_t i = 0; i < initial_count; ++i) {
        initial[i].id = "p" + std::to_string(i + 1);
        initial[i].values.resize(n);
        for (auto& v : initial[i].values) {
            v = uniform(0, initial_top);
        }
        allocation[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(n) - 1))].push_back(i);
    }
    return Instance(std::move(agents), std::move(initial), std::move(pool), std::move(allocation), opt.budget);
}

bool graph_has_clique(const SimpleGraph& g, std::int64_t l, std::uint64_t cap) {
    g.validate();
    return some_subset(g.vertices.size(), l, cap, [&](const std::vector<std::size_t>& pick) {
        for (std::size_t i = 0; i < pick.size(); ++i) {
            for (std::size_t j = i + 1; j < pick.size(); ++j) {
                if (!g.adjacent(pick[i], pick[j])) {
                    return false;
                }
            }
        }
        return true;
    });
}

bool graph_has_independent_set(const SimpleGraph& g, std::int64_t l, std::uint64_t cap) {
    g.validate();
    return some_subset(g.vertices.size(), l, cap, [&](const std::vector<std::size_t>& pick) {
        for (std::size_t i = 0; i < pick.size(); ++i) {
            for (std::size_t j = i + 1; j < pick.size(); ++j) {
                if (g.adjacent(pick[i], pick[j])) {
                    return false;
                }
            }
        }
        return true;
    });
}

bool binpacking_exact_fit(const BinPackingInput& bp, std::uint64_t cap) {
    bp.validate();
    std::vector<std::int64_t> load(static_cast<std::size_t>(bp.bins), 0);
    std::uint64_t nodes = 0;
    std::function<bool(std::size_t)> place = [&](std::size_t j) {
        if (++nodes > cap) {
            throw CapExceeded("bin packing enumeration exceeds cap");
        }
        if (j == bp.sizes.size()) {
            return std::all_of(load.begin(), load.end(), [&](std::int64_t x) { return x == bp.bin_size; });
        }
        for (auto& bin : load) {
            if (bin + bp.sizes[j] <= bp.bin_size) {
                bin += bp.sizes[j];
                if (place(j + 1)) {
                    return true;
                }
                bin -= bp.sizes[j];
            }
        }
        return false;
    };
    return place(0);
}

} // namespace addgoods
