// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "addgoods/addgoods.hpp"
#include "commands.hpp"

using namespace addgoods;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void fail(const std::string& why) {
        pass = false;
        if (notes.size() < 5) {
            notes.push_back(why);
        }
    }
    void note(const std::string& text) { notes.push_back(text); }
};

// Every feasible verdict seen anywhere, for the pipeline criterion.
struct Produced {
    std::string instance;
    std::string verdict;
    std::string origin;
};
std::vector<Produced> produced;

void record(const Instance& inst, const Verdict& v, const std::string& origin) {
    if (v.feasible()) {
        produced.push_back({serialize_instance(inst), serialize_verdict(inst, v), origin});
    }
}

bool certified(const Instance& inst, const Verdict& v) {
    return v.feasible() && is_envy_free(inst, v.extension()) && validate_extension(inst, v.extension()).empty();
}

Instance intro() {
    return Instance({"a1", "a2"}, {{"p", {1, 1}}}, {{"r", Limit::infinite(), {2, 2}}}, {{}, {0}}, Limit::infinite());
}

// ---- independent two-agent oracles -------------------------------------------------

std::int64_t floor_div64(std::int64_t n, std::int64_t d) {
    std::int64_t q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) {
        --q;
    }
    return q;
}

struct TwoAgentCase {
    Instance inst;
    std::vector<std::int64_t> v1, v2; // pool values
    std::int64_t g12 = 0, g21 = 0;    // initial gaps
};

TwoAgentCase random_two_agent(std::mt19937_64& rng, const std::function<void(std::vector<std::int64_t>&,
                                                                              std::vector<std::int64_t>&)>& pool) {
    TwoAgentCase c{intro(), {}, {}};
    pool(c.v1, c.v2);
    std::uniform_int_distribution<int> item_count(1, 3);
    std::uniform_int_distribution<std::int64_t> value(0, 20);
    std::uniform_int_distribution<int> holder(0, 2);
    std::vector<InitialItem> initial;
    std::vector<std::vector<ItemIndex>> allocation(2);
    std::int64_t bundle[2][2] = {{0, 0}, {0, 0}}; // bundle[viewer][holder]
    const int n = item_count(rng);
    for (int i = 0; i < n; ++i) {
        const std::int64_t x = value(rng);
        const std::int64_t y = value(rng);
        initial.push_back({"p" + std::to_string(i + 1), {x, y}});
        const int h = holder(rng);
        if (h < 2) {
            allocation[static_cast<std::size_t>(h)].push_back(static_cast<ItemIndex>(i));
            bundle[0][h] += x;
            bundle[1][h] += y;
        }
    }
    std::vector<PoolItem> items;
    for (std::size_t r = 0; r < c.v1.size(); ++r) {
        items.push_back({"r" + std::to_string(r + 1), Limit::infinite(), {c.v1[r], c.v2[r]}});
    }
    c.inst = Instance({"a1", "a2"}, initial, items, allocation, Limit::infinite());
    c.g12 = bundle[0][1] - bundle[0][0];
    c.g21 = bundle[1][0] - bundle[1][1];
    return c;
}

// Envy-free completion exists iff some integer T in [g_ab, -alpha g_ba] is a multiple of gcd(v_a).
bool interval_divisibility(const TwoAgentCase& c, std::int64_t f1, std::int64_t f2) {
    if (c.g12 <= 0 && c.g21 <= 0) {
        return true;
    }
    const bool first = c.g12 > 0;
    const std::int64_t lo = first ? c.g12 : c.g21;
    const std::int64_t g_back = first ? c.g21 : c.g12;
    const std::int64_t fa = first ? f1 : f2;
    const std::int64_t fb = first ? f2 : f1;
    const std::int64_t hi = floor_div64(-fa * g_back, fb);
    const auto& va = first ? c.v1 : c.v2;
    std::int64_t d = 0;
    for (std::int64_t x : va) {
        d = std::gcd(d, x);
    }
    return floor_div64(hi, d) * d >= lo;
}

// ---- criteria ----------------------------------------------------------------------

Outcome criterion1(double& ms) {
    Outcome o;
    const Instance inst = intro();
    const auto start = Clock::now();
    const Verdict unbounded = solve_unbounded(inst);
    bool oracle_infeasible = true;
    for (std::int64_t k = 0; k <= 6; ++k) {
        oracle_infeasible = oracle_infeasible && !oracle_bounded(inst, k).feasible();
    }
    ms = ms_since(start);
    if (unbounded.feasible()) {
        o.fail("solve_unbounded reported Feasible");
    }
    if (!oracle_infeasible) {
        o.fail("oracle found an extension for some k <= 6");
    }
    if (ms >= 1.0) {
        o.fail("took " + std::to_string(ms) + " ms");
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    std::mt19937_64 rng(2002);
    std::uniform_int_distribution<int> len(1, 3);
    std::uniform_int_distribution<std::int64_t> base(0, 10);
    std::uniform_int_distribution<std::int64_t> factor(1, 2);
    int cases = 0;
    int feasible = 0;
    while (cases < 400) {
        std::int64_t f1 = factor(rng);
        std::int64_t f2 = factor(rng);
        auto c = random_two_agent(rng, [&](auto& v1, auto& v2) {
            const int m = len(rng);
            for (int i = 0; i < m; ++i) {
                const std::int64_t w = base(rng);
                v1.push_back(f1 * w);
                v2.push_back(f2 * w);
            }
        });
        if (std::all_of(c.v1.begin(), c.v1.end(), [](std::int64_t x) { return x == 0; })) {
            continue;
        }
        ++cases;
        const bool expected = interval_divisibility(c, f1, f2);
        const Verdict v = solve_unbounded(c.inst);
        feasible += expected;
        record(c.inst, v, "c2");
        if (v.feasible() != expected) {
            o.fail("case " + std::to_string(cases) + ": solver " + (v.feasible() ? "Feasible" : "Infeasible") +
                   ", interval test disagrees");
        }
        if (v.feasible() && !certified(c.inst, v)) {
            o.fail("case " + std::to_string(cases) + ": extension not certified");
        }
    }
    o.note(std::to_string(cases) + " instances, " + std::to_string(feasible) + " feasible");
    return o;
}

bool proportional64(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[i] * b[j] != a[j] * b[i]) {
                return false;
            }
        }
    }
    return true;
}

Outcome criterion3() {
    Outcome o;
    std::mt19937_64 rng(3003);
    std::uniform_int_distribution<int> len(2, 3);
    std::uniform_int_distribution<std::int64_t> value(0, 20);
    int cases = 0;
    while (cases < 300) {
        auto c = random_two_agent(rng, [&](auto& v1, auto& v2) {
            const int m = len(rng);
            for (int i = 0; i < m; ++i) {
                v1.push_back(value(rng));
                v2.push_back(value(rng));
            }
        });
        const auto zero = [](const auto& v) { return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; }); };
        if (zero(c.v1) || zero(c.v2) || proportional64(c.v1, c.v2) || (c.g12 <= 0 && c.g21 <= 0)) {
            continue;
        }
        ++cases;
        const Verdict v = solve_unbounded(c.inst);
        record(c.inst, v, "c3");
        if (!certified(c.inst, v)) {
            o.fail("case " + std::to_string(cases) + " not resolved");
        }
    }
    o.note(std::to_string(cases) + " instances with initial envy");
    return o;
}

struct BoundedCase {
    Instance inst;
    std::int64_t k;
};

std::vector<BoundedCase> bounded_cases() {
    std::vector<BoundedCase> out;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        RandomInstanceOptions opt;
        opt.agents = 2 + seed % 3;
        opt.pool = 1 + (seed / 3) % 3;
        opt.max_value = 8;
        opt.supply = static_cast<SupplyProfile>(seed % 3);
        opt.max_supply = 3;
        const std::int64_t k = static_cast<std::int64_t>(seed % 6);
        opt.budget = Limit::finite(k);
        opt.seed = 4000 + seed;
        out.push_back({gen_random(opt), k});
    }
    return out;
}

Outcome criterion4(const std::vector<BoundedCase>& cases, double& ms) {
    Outcome o;
    int feasible = 0;
    const auto start = Clock::now();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& [inst, k] = cases[i];
        const Verdict branch = solve_branching(inst, k);
        const Verdict oracle = oracle_bounded(inst, k);
        feasible += branch.feasible();
        record(inst, branch, "c4");
        if (branch.feasible() != oracle.feasible()) {
            o.fail("case " + std::to_string(i) + ": branching and oracle disagree");
        }
        if (branch.feasible() && !certified(inst, branch)) {
            o.fail("case " + std::to_string(i) + ": branching extension not certified");
        }
        if (oracle.feasible() && !certified(inst, oracle)) {
            o.fail("case " + std::to_string(i) + ": oracle extension not certified");
        }
    }
    ms = ms_since(start);
    if (ms >= 10'000) {
        o.fail("took " + std::to_string(ms) + " ms");
    }
    o.note(std::to_string(cases.size()) + " instances, " + std::to_string(feasible) + " feasible");
    return o;
}

Outcome criterion5(double& k4_ms) {
    Outcome o;
    struct NamedGraph {
        std::string name;
        SimpleGraph g;
    };
    const std::vector<NamedGraph> clique_graphs{{"K3", SimpleGraph::complete(3)},
                                                {"K4", SimpleGraph::complete(4)},
                                                {"C4", SimpleGraph::cycle(4)},
                                                {"C5", SimpleGraph::cycle(5)}};
    for (const auto& [name, g] : clique_graphs) {
        for (std::int64_t l : {2, 3}) {
            const Instance inst = gen_clique(g, l);
            const auto start = Clock::now();
            const Verdict v = dispatch(inst);
            const double ms = ms_since(start);
            record(inst, v, "c5 clique");
            if (name == "K4" && l == 3) {
                k4_ms = ms;
                if (inst.agent_count() != 11 || sum_finite_supplies(inst) != Limit::finite(9)) {
                    o.fail("K4/l=3 instance has the wrong shape");
                }
                if (ms >= 5000) {
                    o.fail("K4/l=3 took " + std::to_string(ms) + " ms");
                }
            }
            if (v.feasible() != graph_has_clique(g, l) || (v.feasible() && !certified(inst, v))) {
                o.fail("clique " + name + " l=" + std::to_string(l));
            }
        }
    }
    const std::vector<NamedGraph> indset_graphs{
        {"P3", SimpleGraph::path(3)}, {"K3", SimpleGraph::complete(3)}, {"C5", SimpleGraph::cycle(5)}};
    for (const auto& [name, g] : indset_graphs) {
        for (std::int64_t l : {1, 2, 3}) {
            const Instance inst = gen_indset(g, l);
            const Verdict v = solve_branching(inst, l);
            record(inst, v, "c5 indset");
            if (v.feasible() != graph_has_independent_set(g, l) || (v.feasible() && !certified(inst, v))) {
                o.fail("indset " + name + " l=" + std::to_string(l));
            }
        }
    }
    const std::vector<BinPackingInput> packings{{{1, 1, 2}, 2, 2}, {{3, 3, 2}, 2, 4}, {{2, 2, 2, 2}, 2, 4}};
    for (const auto& bp : packings) {
        const Instance inst = gen_binpacking(bp);
        const Verdict v = dispatch(inst);
        record(inst, v, "c5 binpacking");
        if (v.feasible() != binpacking_exact_fit(bp) || (v.feasible() && !certified(inst, v))) {
            o.fail("binpacking with " + std::to_string(bp.sizes.size()) + " integers");
        }
    }
    o.note("K4/l=3 clique solved in " + std::to_string(k4_ms) + " ms");
    return o;
}

std::size_t nonzero_classes(const Instance& inst) {
    std::size_t n = 0;
    for (const auto& c : proportional_classes(inst)) {
        n += c.is_zero_class ? 0 : 1;
    }
    return n;
}

Outcome criterion6() {
    Outcome o;
    int cases = 0;
    int with_steps = 0;
    std::size_t longest = 0;
    for (std::uint64_t seed = 0; cases < 150 && seed < 10'000; ++seed) {
        RandomInstanceOptions opt;
        opt.agents = 3 + seed % 5;
        opt.pool = 2 + seed % 3;
        opt.max_value = 15;
        opt.proportional_group = seed % 3 == 0 ? 2 : 0;
        opt.seed = 6000 + seed;
        const Instance inst = gen_random(opt);
        if (nonzero_classes(inst) < 2) {
            continue;
        }
        Phase2Trace trace;
        const Verdict v = solve_unbounded(inst, &trace);
        record(inst, v, "c6");
        if (trace.edge_counts.empty()) {
            continue; // infeasible before phase 2
        }
        ++cases;
        const std::size_t steps = trace.edge_counts.size() - 1;
        with_steps += steps > 0;
        longest = std::max(longest, steps);
        for (std::size_t i = 1; i < trace.edge_counts.size(); ++i) {
            if (trace.edge_counts[i] >= trace.edge_counts[i - 1]) {
                o.fail("seed " + std::to_string(opt.seed) + ": edge count did not drop at step " + std::to_string(i));
            }
        }
        const std::size_t n = inst.agent_count();
        if (steps > n * n) {
            o.fail("seed " + std::to_string(opt.seed) + ": " + std::to_string(steps) + " steps");
        }
        if (trace.edge_counts.back() != 0 || !certified(inst, v)) {
            o.fail("seed " + std::to_string(opt.seed) + ": did not end envy-free");
        }
    }
    if (cases < 100) {
        o.fail("only " + std::to_string(cases) + " instances reached phase 2");
    }
    o.note(std::to_string(cases) + " traced instances, " + std::to_string(with_steps) +
           " with at least one step, longest " + std::to_string(longest));
    return o;
}

Instance scale_agent(const Instance& inst, AgentIndex agent, Value c, bool initial_too) {
    std::vector<PoolItem> pool = inst.pool_items();
    for (auto& r : pool) {
        r.values[agent] *= c;
    }
    std::vector<InitialItem> initial = inst.initial_items();
    if (initial_too) {
        for (auto& p : initial) {
            p.values[agent] *= c;
        }
    }
    return {inst.agents(), initial, pool, inst.allocation(), inst.budget()};
}

Outcome criterion7(Outcome& whole) {
    Outcome o;
    int cases = 0;
    int mismatches = 0;
    int whole_mismatches = 0;
    int infeasible = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomInstanceOptions opt;
        opt.agents = 2 + seed % 4;
        opt.pool = 1 + seed % 3;
        opt.max_value = 10;
        opt.proportional_group = seed % 2 ? opt.agents : 2;
        opt.seed = 7000 + seed;
        const Instance inst = gen_random(opt);
        const bool base = solve_unbounded(inst).feasible();
        infeasible += !base;
        const auto agent = static_cast<AgentIndex>(seed % opt.agents);
        for (Value c : {2, 3, 5}) {
            ++cases;
            const Instance scaled = scale_agent(inst, agent, c, false);
            const Verdict v = solve_unbounded(scaled);
            record(scaled, v, "c7");
            if (v.feasible() != base) {
                ++mismatches;
                o.fail("seed " + std::to_string(opt.seed) + ": scaling " + inst.agent_id(agent) + "'s pool values by " +
                       std::to_string(c) + " turns " + (base ? "Feasible" : "Infeasible") + " into " +
                       (v.feasible() ? "Feasible" : "Infeasible"));
            }
            const Instance all = scale_agent(inst, agent, c, true);
            if (solve_unbounded(all).feasible() != base) {
                ++whole_mismatches;
                whole.fail("seed " + std::to_string(opt.seed) + " c=" + std::to_string(c));
            }
        }
    }
    o.note(std::to_string(cases) + " scalings of 200 instances (" + std::to_string(infeasible) +
           " infeasible), " + std::to_string(mismatches) + " verdict changes");
    whole.note("scaling the whole valuation (initial and pool items): " + std::to_string(whole_mismatches) +
               " verdict changes in " + std::to_string(cases));
    return o;
}

Outcome criterion8(const std::vector<BoundedCase>& cases) {
    Outcome o;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& [inst, k] = cases[i];
        const Verdict ilp = solve_ilp_bb(inst, Limit::finite(k));
        const Verdict branch = solve_branching(inst, k);
        record(inst, ilp, "c8");
        if (ilp.feasible() != branch.feasible()) {
            o.fail("case " + std::to_string(i) + ": ILP and branching disagree");
        }
        if (ilp.feasible() && !certified(inst, ilp)) {
            o.fail("case " + std::to_string(i) + ": ILP extension not certified");
        }
    }
    o.note(std::to_string(cases.size()) + " instances");
    return o;
}

Outcome criterion9(double& worst_ms) {
    Outcome o;
    int feasible = 0;
    constexpr int runs = 30;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        RandomInstanceOptions opt;
        opt.agents = 12;
        opt.pool = 6;
        opt.max_value = 1'000'000;
        opt.proportional_group = seed % 3 == 0 ? 0 : 2 + seed % 5;
        opt.seed = 9000 + seed;
        const Instance inst = gen_random(opt);
        const auto start = Clock::now();
        const Verdict v = solve_unbounded(inst);
        const double ms = ms_since(start);
        worst_ms = std::max(worst_ms, ms);
        feasible += v.feasible();
        record(inst, v, "c9");
        if (ms >= 1000) {
            o.fail("seed " + std::to_string(opt.seed) + " took " + std::to_string(ms) + " ms");
        }
        if (v.feasible() && !certified(inst, v)) {
            o.fail("seed " + std::to_string(opt.seed) + " not certified");
        }
    }
    o.note(std::to_string(runs) + " instances, " + std::to_string(feasible) + " feasible, slowest " +
           std::to_string(worst_ms) + " ms");
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / "addgoods_acceptance";
    std::filesystem::create_directories(dir);
    const std::string inst_path = (dir / "instance.json").string();
    const std::string verdict_path = (dir / "verdict.json").string();
    for (const auto& p : produced) {
        std::ofstream(inst_path, std::ios::trunc) << p.instance;
        std::ofstream(verdict_path, std::ios::trunc) << p.verdict;
        std::istringstream in;
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run({"check", inst_path, verdict_path}, in, out, err);
        if (code != cli::exit_ok) {
            o.fail(p.origin + ": check exited " + std::to_string(code) + " " + err.str());
        }
    }
    std::filesystem::remove_all(dir);
    if (produced.empty()) {
        o.fail("no feasible verdicts to check");
    }
    o.note(std::to_string(produced.size()) + " feasible verdicts checked");
    return o;
}

} // namespace

int main() {
    int failures = 0;
    const auto report = [&](int id, const std::string& name, const Outcome& o, double ms = -1) {
        std::printf("[%s] criterion %d: %s", o.pass ? "PASS" : "FAIL", id, name.c_str());
        if (ms >= 0) {
            std::printf(" (%.3f ms)", ms);
        }
        std::printf("\n");
        for (const auto& n : o.notes) {
            std::printf("       %s\n", n.c_str());
        }
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    };

    double ms = 0;
    const Outcome c1 = criterion1(ms);
    record(intro(), solve_unbounded(intro()), "c1");
    report(1, "intro instance is infeasible (unbounded, and oracle for k <= 6) in under 1 ms", c1, ms);

    report(2, "two proportional agents match the interval divisibility test", criterion2());
    report(3, "two non-proportional agents with envy are always resolved", criterion3());

    const auto cases = bounded_cases();
    const Outcome c4 = criterion4(cases, ms);
    report(4, "branching matches the exhaustive oracle", c4, ms);

    double k4_ms = 0;
    report(5, "reduction instances match clique, independent set and bin packing", criterion5(k4_ms));
    report(6, "phase 2 strictly reduces envy edges within |A|^2 steps", criterion6());

    Outcome whole;
    const Outcome c7 = criterion7(whole);
    report(7, "scaling one agent's pool values leaves the verdict unchanged", c7);
    for (const auto& n : whole.notes) {
        std::printf("       %s\n", n.c_str());
    }

    report(8, "ILP branch-and-bound agrees with branching", criterion8(cases));
    double worst = 0;
    report(9, "12 agents, 6 pool items, values up to 10^6 solve in under 1 s each", criterion9(worst));
    report(10, "check accepts every feasible verdict produced above", criterion10());

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
