// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include "addgoods/unbounded.hpp"

#include <algorithm>
#include <numeric>

namespace addgoods {

namespace {

void require_unlimited_supplies(const Instance& inst) {
    if (!inst.all_supplies_infinite()) {
        throw ModelError("every pool item must have infinite supply");
    }
}

std::vector<BigInt> pool_vector(const Instance& inst, AgentIndex a) {
    std::vector<BigInt> out;
    out.reserve(inst.pool_count());
    for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
        out.emplace_back(inst.pool_value(a, r));
    }
    return out;
}

BigInt product(Value lhs, Value rhs) { return BigInt(lhs) * rhs; }

std::optional<ItemIndex> first_valued_item(const Instance& inst, AgentIndex a) {
    for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
        if (inst.pool_value(a, r) > 0) {
            return r;
        }
    }
    return std::nullopt;
}

// v_a = alpha * v_b; both vectors nonzero and proportional.
Rational proportionality_factor(const Instance& inst, AgentIndex a, AgentIndex b) {
    const ItemIndex r = *first_valued_item(inst, b);
    return Rational(inst.pool_value(a, r), inst.pool_value(b, r));
}

// Lexicographic by agent id, the order used to pick envy edges.
bool id_less(const Instance& inst, const EnvyEdge& lhs, const EnvyEdge& rhs) {
    const auto& ids = inst.agents();
    if (ids[lhs.envier] != ids[rhs.envier]) {
        return ids[lhs.envier] < ids[rhs.envier];
    }
    return ids[lhs.envied] < ids[rhs.envied];
}

} // namespace

bool proportional_over_pool(const Instance& inst, AgentIndex a, AgentIndex b) {
    const bool blind_a = inst.pool_blind(a);
    const bool blind_b = inst.pool_blind(b);
    if (blind_a || blind_b) {
        return blind_a && blind_b;
    }
    const ItemIndex ref = *first_valued_item(inst, b);
    for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
        if (product(inst.pool_value(a, r), inst.pool_value(b, ref)) !=
            product(inst.pool_value(a, ref), inst.pool_value(b, r))) {
            return false;
        }
    }
    return true;
}

std::vector<EquivalenceClass> proportional_classes(const Instance& inst) {
    std::vector<EquivalenceClass> classes;
    std::optional<std::size_t> zero_class;
    for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
        if (inst.pool_blind(a)) {
            if (!zero_class) {
                zero_class = classes.size();
                classes.push_back({{}, {}, true});
            }
            classes[*zero_class].members.push_back(a);
            classes[*zero_class].factors.emplace_back(1);
            continue;
        }
        bool placed = false;
        for (auto& cls : classes) {
            if (!cls.is_zero_class && proportional_over_pool(inst, a, cls.members.front())) {
                cls.members.push_back(a);
                cls.factors.push_back(proportionality_factor(inst, a, cls.members.front()));
                placed = true;
                break;
            }
        }
        if (!placed) {
            classes.push_back({{a}, {Rational(1)}, false});
        }
    }
    return classes;
}

NormalizedClass normalize_class(const Instance& inst, const EquivalenceClass& cls) {
    if (cls.is_zero_class || cls.members.empty()) {
        throw ModelError("cannot normalize the zero class");
    }
    NormalizedClass out;
    out.cls = cls;
    const std::size_t k = cls.members.size();
    out.divisors.reserve(k);
    for (AgentIndex a : cls.members) {
        out.divisors.push_back(gcd_list(pool_vector(inst, a)));
    }
    out.normalized_values = pool_vector(inst, cls.members.front());
    for (auto& v : out.normalized_values) {
        v /= out.divisors.front();
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
            if (BigInt(inst.pool_value(cls.members[i], r)) != out.normalized_values[r] * out.divisors[i]) {
                throw std::logic_error("class members do not share a normalized valuation");
            }
        }
    }
    out.gaps.assign(k * k, BigInt(0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j) {
                out.gaps[i * k + j] =
                    ceil_div(inst.initial_gap(cls.members[i], cls.members[j]), out.divisors[i]);
            }
        }
    }
    return out;
}

UnitBundlePair unit_bundle_pair(std::span<const BigInt> normalized_values) {
    BezoutCertificate cert = bezout_list(normalized_values);
    if (cert.gcd != 1) {
        throw std::domain_error("normalized values must have gcd 1");
    }
    UnitBundlePair pair;
    for (const auto& c : cert.coefficients) {
        pair.x.push_back(c > 0 ? c : BigInt(0));
        pair.y.push_back(c < 0 ? BigInt(-c) : BigInt(0));
    }
    return pair;
}

DifferenceSolution solve_difference_constraints(std::size_t variables,
                                                std::span<const DifferenceConstraint> constraints) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    DifferenceSolution out;
    std::vector<BigInt> dist(variables, BigInt(0)); // virtual source reaches everyone at 0
    std::vector<std::size_t> pred_edge(variables, none);

    std::size_t last_updated = none;
    for (std::size_t pass = 0; pass <= variables; ++pass) {
        last_updated = none;
        for (std::size_t e = 0; e < constraints.size(); ++e) {
            const auto& con = constraints[e];
            BigInt candidate = dist[con.lhs] - con.bound;
            if (candidate < dist[con.rhs]) {
                dist[con.rhs] = std::move(candidate);
                pred_edge[con.rhs] = e;
                last_updated = con.rhs;
            }
        }
        if (last_updated == none) {
            break;
        }
    }

    if (last_updated != none) {
        // Still relaxing after |V| passes: walk back into the cycle, then collect it.
        std::size_t v = last_updated;
        for (std::size_t i = 0; i < variables; ++i) {
            if (pred_edge[v] == none) {
                throw std::logic_error("broken predecessor chain in constraint graph");
            }
            v = constraints[pred_edge[v]].lhs;
        }
        std::vector<std::size_t> cycle;
        std::size_t u = v;
        do {
            cycle.push_back(u);
            u = constraints[pred_edge[u]].lhs;
        } while (u != v);
        // Collected against edge direction; reverse so that cycle[i] -> cycle[i+1] are edges.
        std::reverse(cycle.begin(), cycle.end());
        out.negative_cycle = std::move(cycle);
        return out;
    }

    BigInt lowest = variables == 0 ? BigInt(0) : *std::min_element(dist.begin(), dist.end());
    for (auto& d : dist) {
        d -= lowest;
    }
    out.potentials = std::move(dist);
    return out;
}

Phase1Result phase1_class(const Instance& inst, const NormalizedClass& cls) {
    require_unlimited_supplies(inst);
    const std::size_t k = cls.size();
    Phase1Result result;
    result.system.variables = cls.cls.members;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j) {
                result.system.constraints.push_back({i, j, cls.gap(i, j)});
            }
        }
    }

    DifferenceSolution solved = solve_difference_constraints(k, result.system.constraints);
    if (!solved.feasible()) {
        NegativeCycle witness;
        witness.class_members = cls.cls.members;
        for (std::size_t v : solved.negative_cycle) {
            witness.cycle.push_back(cls.cls.members[v]);
        }
        result.outcome = std::move(witness);
        return result;
    }
    result.system.solution = solved.potentials;

    Extension ext = Extension::empty_for(inst);
    const UnitBundlePair unit = unit_bundle_pair(cls.normalized_values);
    for (std::size_t i = 0; i < k; ++i) {
        const BigInt& z = solved.potentials[i];
        if (z == 0) {
            continue;
        }
        for (std::size_t j = 0; j < k; ++j) {
            const auto& bundle = (i == j) ? unit.x : unit.y;
            for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
                if (bundle[r] != 0) {
                    ext.add(cls.cls.members[j], r, z * bundle[r]);
                }
            }
        }
    }

    for (AgentIndex a : cls.cls.members) {
        for (AgentIndex b : cls.cls.members) {
            if (a != b && envy_gap(inst, ext, a, b) > 0) {
                throw std::logic_error("phase 1 left envy inside a proportional class");
            }
        }
    }
    result.outcome = std::move(ext);
    return result;
}

Extension NonProportionalResolution::as_extension(const Instance& inst) const {
    Extension ext = Extension::empty_for(inst);
    ext.add(envier, preferred_item, copies_to_envier);
    if (other_item) {
        ext.add(envied, *other_item, copies_to_envied);
    }
    return ext;
}

NonProportionalResolution resolve_pair_nonproportional(const Instance& inst, const Extension& ext,
                                                       AgentIndex envier, AgentIndex envied) {
    require_unlimited_supplies(inst);
    BigInt gap = envy_gap(inst, ext, envier, envied);
    if (gap <= 0) {
        throw ModelError(inst.agent_id(envier) + " does not envy " + inst.agent_id(envied));
    }
    if (proportional_over_pool(inst, envier, envied)) {
        throw ModelError("pair is proportional");
    }
    if (inst.pool_blind(envier)) {
        throw ModelError(inst.agent_id(envier) + " values every pool item at 0; its envy cannot be resolved");
    }

    NonProportionalResolution res;
    res.envier = envier;
    res.envied = envied;
    res.gap = gap;

    if (inst.pool_blind(envied)) {
        ItemIndex best = 0;
        for (ItemIndex r = 1; r < inst.pool_count(); ++r) {
            if (inst.pool_value(envier, r) > inst.pool_value(envier, best)) {
                best = r;
            }
        }
        res.preferred_item = best;
        res.x = inst.pool_value(envier, best);
        res.c = res.y = res.d = 0;
        res.copies_to_envier = ceil_div(gap, res.x);
        res.copies_to_envied = 0;
        return res;
    }

    // Both vectors are nonzero and not proportional, so some item disagrees with `ref`.
    const ItemIndex ref = *first_valued_item(inst, envied);
    for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
        BigInt lhs = product(inst.pool_value(envier, ref), inst.pool_value(envied, r));
        BigInt rhs = product(inst.pool_value(envier, r), inst.pool_value(envied, ref));
        if (lhs == rhs) {
            continue;
        }
        // r1 is the item the envier values more relative to the envied agent: x*d > c*y.
        const ItemIndex r1 = lhs > rhs ? ref : r;
        const ItemIndex r2 = lhs > rhs ? r : ref;
        res.preferred_item = r1;
        res.other_item = r2;
        res.x = inst.pool_value(envier, r1);
        res.c = inst.pool_value(envier, r2);
        res.y = inst.pool_value(envied, r1);
        res.d = inst.pool_value(envied, r2);
        res.copies_to_envier = gap * res.d;
        res.copies_to_envied = gap * res.y;
        return res;
    }
    throw std::logic_error("non-proportional pair without a disagreeing item");
}

ProportionalPairCheck pair_proportional_feasible(const Instance& inst, AgentIndex a, AgentIndex b) {
    require_unlimited_supplies(inst);
    if (inst.pool_blind(a)) {
        throw ModelError("zero vector over the pool: " + inst.agent_id(a));
    }
    if (!proportional_over_pool(inst, a, b)) {
        throw ModelError("pair is not proportional");
    }
    ProportionalPairCheck check;
    check.lo = inst.initial_gap(a, b);
    if (check.lo <= 0) {
        throw ModelError(inst.agent_id(a) + " does not envy " + inst.agent_id(b));
    }
    check.alpha = proportionality_factor(inst, a, b);
    const BigInt reverse_gap = inst.initial_gap(b, a);
    check.hi = floor_div(-boost::multiprecision::numerator(check.alpha) * reverse_gap,
                         boost::multiprecision::denominator(check.alpha));
    check.divisor = gcd_list(pool_vector(inst, a));
    BigInt target = check.divisor * ceil_div(check.lo, check.divisor);
    check.feasible = target <= check.hi;
    if (check.feasible) {
        check.target = std::move(target);
    }
    return check;
}

Extension ProportionalResolution::as_extension(const Instance& inst) const {
    Extension ext = Extension::empty_for(inst);
    for (ItemIndex r = 0; r < inst.pool_count(); ++r) {
        ext.add(envier, r, to_envier[r]);
        ext.add(envied, r, to_envied[r]);
    }
    return ext;
}

ProportionalResolution pair_proportional_construct(const Instance& inst, AgentIndex a, AgentIndex b,
                                                   const BigInt& target) {
    require_unlimited_supplies(inst);
    if (inst.pool_blind(a) || !proportional_over_pool(inst, a, b)) {
        throw ModelError("pair is not proportional with nonzero valuations");
    }
    const BezoutCertificate cert = bezout_list(pool_vector(inst, a));
    if (target % cert.gcd != 0) {
        throw ModelError("target " + target.str() + " is not divisible by " + cert.gcd.str());
    }
    ProportionalResolution res;
    res.envier = a;
    res.envied = b;
    res.target = target;
    res.quotient = target / cert.gcd;
    res.coefficients = cert.coefficients;
    for (const auto& c : cert.coefficients) {
        BigInt scaled = res.quotient * c;
        res.to_envier.push_back(scaled > 0 ? scaled : BigInt(0));
        res.to_envied.push_back(scaled < 0 ? BigInt(-scaled) : BigInt(0));
    }
    const Extension ext = res.as_extension(inst);
    if (envy_gap(inst, ext, a, b) > 0 || envy_gap(inst, ext, b, a) > 0) {
        throw std::logic_error("target " + target.str() + " leaves envy between the pair");
    }
    return res;
}

Extension phase2(const Instance& inst, Extension ext, Phase2Trace* trace) {
    require_unlimited_supplies(inst);
    const std::size_t n = inst.agent_count();
    const std::size_t max_steps = n * n;
    for (std::size_t step = 0;; ++step) {
        EnvyGraph graph = envy_graph(inst, ext);
        if (trace) {
            trace->edge_counts.push_back(graph.edges.size());
        }
        if (graph.edgeless()) {
            return ext;
        }
        if (step >= max_steps) {
            throw std::logic_error("phase 2 did not terminate within |A|^2 steps");
        }
        for (const auto& e : graph.edges) {
            if (proportional_over_pool(inst, e.envier, e.envied)) {
                throw std::logic_error("phase 2 reached an envy edge between proportional agents");
            }
        }
        const EnvyEdge& edge = *std::min_element(
            graph.edges.begin(), graph.edges.end(),
            [&](const EnvyEdge& lhs, const EnvyEdge& rhs) { return id_less(inst, lhs, rhs); });

        const NonProportionalResolution res = resolve_pair_nonproportional(inst, ext, edge.envier, edge.envied);
        if (trace) {
            trace->resolved.emplace_back(edge.envier, edge.envied);
        }
        // Everyone gets one of the two bundles; third parties take the one they value more.
        for (AgentIndex agent = 0; agent < n; ++agent) {
            bool take_preferred;
            if (agent == res.envier) {
                take_preferred = true;
            } else if (agent == res.envied) {
                take_preferred = false;
            } else {
                BigInt first = res.copies_to_envier * inst.pool_value(agent, res.preferred_item);
                BigInt second = res.other_item ? res.copies_to_envied * inst.pool_value(agent, *res.other_item)
                                               : BigInt(0);
                take_preferred = first >= second;
            }
            if (take_preferred) {
                ext.add(agent, res.preferred_item, res.copies_to_envier);
            } else if (res.other_item) {
                ext.add(agent, *res.other_item, res.copies_to_envied);
            }
        }
    }
}

Verdict solve_unbounded(const Instance& inst, Phase2Trace* trace) {
    if (inst.pool_count() == 0) {
        throw ModeMismatch("unbounded mode needs at least one pool item");
    }
    if (!inst.all_supplies_infinite() || inst.budget().is_finite()) {
        throw ModeMismatch("unbounded mode needs infinite supplies and an infinite budget");
    }

    const auto classes = proportional_classes(inst);
    for (const auto& cls : classes) {
        if (!cls.is_zero_class) {
            continue;
        }
        for (AgentIndex a : cls.members) {
            for (AgentIndex b = 0; b < inst.agent_count(); ++b) {
                BigInt gap = inst.initial_gap(a, b);
                if (a != b && gap > 0) {
                    return make_infeasible(ZeroAgentEnvy{a, b, std::move(gap)}, "unbounded");
                }
            }
        }
    }

    Extension ext = Extension::empty_for(inst);
    for (const auto& cls : classes) {
        if (cls.is_zero_class || cls.members.size() < 2) {
            continue;
        }
        Phase1Result phase1 = phase1_class(inst, normalize_class(inst, cls));
        if (!phase1.feasible()) {
            return make_infeasible(std::get<NegativeCycle>(std::move(phase1.outcome)), "unbounded");
        }
        ext += std::get<Extension>(phase1.outcome);
    }
    ext = phase2(inst, std::move(ext), trace);
    return make_feasible(inst, std::move(ext), "unbounded");
}

bool verify_negative_cycle(const Instance& inst, const NegativeCycle& witness) {
    const auto& cycle = witness.cycle;
    if (cycle.size() < 2) {
        return false;
    }
    for (AgentIndex a : cycle) {
        if (a >= inst.agent_count() || inst.pool_blind(a) || !proportional_over_pool(inst, a, cycle.front())) {
            return false;
        }
    }
    BigInt total = 0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const AgentIndex from = cycle[i];
        const AgentIndex to = cycle[(i + 1) % cycle.size()];
        if (from == to) {
            return false;
        }
        total += ceil_div(inst.initial_gap(from, to), gcd_list(pool_vector(inst, from)));
    }
    return total > 0;
}

} // namespace addgoods
