// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "addgoods/addgoods.hpp"

namespace addgoods::cli {

namespace {

std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open " + path);
    }
    buf << file.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot write " + path);
    }
    file << text;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t used = 0;
        out.push_back(std::stoll(part, &used));
        if (used != part.size()) {
            throw std::invalid_argument("not an integer: " + part);
        }
    }
    return out;
}

Limit parse_limit_arg(const std::string& text) {
    if (text == "inf") {
        return Limit::infinite();
    }
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) {
        throw std::invalid_argument("expected an integer or inf: " + text);
    }
    return Limit::finite(v);
}

std::string agent_name(const Instance& inst, AgentIndex a) { return inst.agent_id(a); }

bool witness_holds(const Instance& inst, const Witness& witness, std::vector<std::string>& lines) {
    if (const auto* w = std::get_if<ZeroAgentEnvy>(&witness)) {
        const BigInt gap = inst.initial_gap(w->agent, w->envied);
        const bool ok = w->agent != w->envied && inst.pool_blind(w->agent) && gap > 0;
        lines.push_back(std::string(ok ? "ok" : "FAIL") + ": " + agent_name(inst, w->agent) +
                        " values the pool at 0 and envies " + agent_name(inst, w->envied) + " by " + gap.str());
        return ok;
    }
    if (const auto* w = std::get_if<NegativeCycle>(&witness)) {
        const bool ok = verify_negative_cycle(inst, *w);
        lines.push_back(std::string(ok ? "ok" : "FAIL") + ": rounded gaps around the cycle sum to a positive number");
        return ok;
    }
    // Search exhaustion is only re-checkable by searching again; use the enumeration oracle.
    std::optional<std::int64_t> k;
    if (inst.budget().is_finite()) {
        k = inst.budget().value();
    } else if (inst.all_supplies_finite()) {
        k = sum_of_finite_supplies_only(inst);
    }
    if (!k) {
        lines.push_back("ok: exhaustive witness accepted without re-enumeration (unbounded copies)");
        return true;
    }
    try {
        const bool ok = !oracle_bounded(inst, *k).feasible();
        lines.push_back(std::string(ok ? "ok" : "FAIL") + ": oracle enumeration up to size " + std::to_string(*k) +
                        (ok ? " finds no envy-free extension" : " finds an envy-free extension"));
        return ok;
    } catch (const CapExceeded&) {
        lines.push_back("ok: exhaustive witness accepted; instance exceeds the oracle cap");
        return true;
    }
}

int report(const CheckReport& rep, std::ostream& out) {
    for (const auto& line : rep.lines) {
        out << line << "\n";
    }
    out << (rep.passed ? "PASS" : "FAIL") << "\n";
    return rep.passed ? exit_ok : exit_negative;
}

void print_envy_graph(const Instance& inst, const Extension& ext, std::ostream& out) {
    const EnvyGraph graph = envy_graph(inst, ext);
    if (graph.edgeless()) {
        out << "envy-free\n";
        return;
    }
    for (const auto& e : graph.edges) {
        out << inst.agent_id(e.envier) << " -> " << inst.agent_id(e.envied) << " gap " << e.gap.str() << "\n";
    }
}

} // namespace

CheckReport check_verdict(const Instance& inst, std::string_view verdict_text) {
    CheckReport rep;
    const VerdictDocument doc = parse_verdict(inst, verdict_text);
    if (!doc.feasible) {
        if (!doc.witness) {
            rep.lines.emplace_back("FAIL: infeasible verdict without a witness");
            return rep;
        }
        rep.passed = witness_holds(inst, *doc.witness, rep.lines);
        return rep;
    }

    bool ok = true;
    for (const auto& v : doc.id_violations) {
        rep.lines.push_back("FAIL: " + v.message);
        ok = false;
    }
    for (const auto& v : validate_extension(inst, doc.extension)) {
        rep.lines.push_back("FAIL: " + v.message);
        ok = false;
    }
    const BigInt size = doc.extension.size();
    if (size != doc.declared_size) {
        rep.lines.push_back("FAIL: declared size " + doc.declared_size.str() + " but counts sum to " + size.str());
        ok = false;
    }
    const EnvyGraph graph = envy_graph(inst, doc.extension);
    for (const auto& e : graph.edges) {
        rep.lines.push_back("FAIL: " + inst.agent_id(e.envier) + " envies " + inst.agent_id(e.envied) + " by " +
                            e.gap.str());
        ok = false;
    }
    if (ok) {
        rep.lines.push_back("ok: extension of size " + size.str() + " is valid and envy-free");
    }
    rep.passed = ok;
    return rep;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Envy elimination by adding pool items to a fixed allocation", "addgoods"};
    app.require_subcommand(1);

    std::string file = "-";
    std::string out_path = "-";
    std::string mode_text = "auto";
    auto* solve = app.add_subcommand("solve", "Solve an instance; exit 0 feasible, 1 infeasible, 2 error");
    solve->add_option("file", file, "Instance file, - for stdin")->required();
    solve->add_option("--mode", mode_text, "auto|unbounded|branch|ilp|hybrid")
        ->check(CLI::IsMember({"auto", "unbounded", "branch", "ilp", "hybrid"}));
    solve->add_option("--out", out_path, "Verdict file, - for stdout");

    std::string verdict_file;
    auto* check = app.add_subcommand("check", "Recompute envy-freeness and validity of a verdict");
    check->add_option("instance", file, "Instance file")->required();
    check->add_option("verdict", verdict_file, "Verdict file")->required();

    std::optional<std::int64_t> oracle_k;
    std::uint64_t oracle_cap = default_enumeration_cap;
    auto* oracle = app.add_subcommand("oracle", "Exhaustive enumeration of extensions up to size k");
    oracle->add_option("file", file, "Instance file, - for stdin")->required();
    oracle->add_option("--k", oracle_k, "Size bound (default: budget, or p when all supplies are finite)");
    oracle->add_option("--cap", oracle_cap, "Maximum number of candidate extensions");
    oracle->add_option("--out", out_path, "Verdict file, - for stdout");

    auto* generate = app.add_subcommand("generate", "Write a generated instance");
    generate->require_subcommand(1);
    generate->add_option("--out", out_path, "Instance file, - for stdout");
    std::string graph_file;
    std::int64_t size_l = 0;
    auto* gen_clique_cmd = generate->add_subcommand("clique", "Clique reduction instance");
    gen_clique_cmd->add_option("graph", graph_file, "Graph file")->required();
    gen_clique_cmd->add_option("--l", size_l, "Clique size")->required();
    auto* gen_indset_cmd = generate->add_subcommand("indset", "Independent set reduction instance");
    gen_indset_cmd->add_option("graph", graph_file, "Graph file")->required();
    gen_indset_cmd->add_option("--l", size_l, "Independent set size")->required();
    std::string sizes_text;
    BinPackingInput bp;
    auto* gen_bp_cmd = generate->add_subcommand("binpacking", "Bin packing reduction instance");
    gen_bp_cmd->add_option("--u", sizes_text, "Comma-separated positive integers")->required();
    gen_bp_cmd->add_option("--bins", bp.bins, "Number of bins")->required();
    gen_bp_cmd->add_option("--binsize", bp.bin_size, "Bin size")->required();
    RandomInstanceOptions ropt;
    std::string supply_text = "inf";
    std::string budget_text = "inf";
    auto* gen_random_cmd = generate->add_subcommand("random", "Seeded random instance");
    gen_random_cmd->add_option("--agents", ropt.agents, "Number of agents")->required()->check(CLI::PositiveNumber);
    gen_random_cmd->add_option("--pool", ropt.pool, "Number of pool items")->required()->check(CLI::PositiveNumber);
    gen_random_cmd->add_option("--seed", ropt.seed, "Seed")->required();
    gen_random_cmd->add_option("--max-value", ropt.max_value, "Largest pool value");
    gen_random_cmd->add_option("--supply", supply_text, "inf|finite|mixed")
        ->check(CLI::IsMember({"inf", "finite", "mixed"}));
    gen_random_cmd->add_option("--max-supply", ropt.max_supply, "Largest finite supply");
    gen_random_cmd->add_option("--budget", budget_text, "Budget, integer or inf");
    gen_random_cmd->add_option("--initial-items", ropt.initial_items, "Number of initial items");
    gen_random_cmd->add_flag("--binary", ropt.binary, "Binary pool valuations");
    gen_random_cmd->add_option("--proportional-group", ropt.proportional_group,
                               "Give the first N agents proportional pool valuations");
    for (auto* sub : {gen_clique_cmd, gen_indset_cmd, gen_bp_cmd, gen_random_cmd}) {
        sub->fallthrough(); // lets --out follow the generator's own options
    }

    std::string envy_verdict;
    auto* envy = app.add_subcommand("envy-graph", "Print envy edges with their gaps");
    envy->add_option("file", file, "Instance file, - for stdin")->required();
    envy->add_option("--verdict", envy_verdict, "Apply the extension from this verdict file");

    std::vector<const char*> argv{"addgoods"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_error;
    }

    try {
        if (*solve) {
            const Instance inst = parse_instance(read_input(file, in));
            const Verdict verdict = dispatch(inst, parse_mode(mode_text));
            write_output(out_path, serialize_verdict(inst, verdict), out);
            return verdict.feasible() ? exit_ok : exit_negative;
        }
        if (*check) {
            const Instance inst = parse_instance(read_input(file, in));
            return report(check_verdict(inst, read_input(verdict_file, in)), out);
        }
        if (*oracle) {
            const Instance inst = parse_instance(read_input(file, in));
            if (!oracle_k) {
                if (inst.budget().is_finite()) {
                    oracle_k = inst.budget().value();
                } else if (inst.all_supplies_finite()) {
                    oracle_k = sum_of_finite_supplies_only(inst);
                } else {
                    throw std::invalid_argument("--k is required when copies are unbounded");
                }
            }
            const Verdict verdict = oracle_bounded(inst, *oracle_k, oracle_cap);
            write_output(out_path, serialize_verdict(inst, verdict), out);
            return verdict.feasible() ? exit_ok : exit_negative;
        }
        if (*generate) {
            std::string text;
            if (*gen_clique_cmd) {
                text = serialize_instance(gen_clique(parse_graph(read_input(graph_file, in)), size_l));
            } else if (*gen_indset_cmd) {
                text = serialize_instance(gen_indset(parse_graph(read_input(graph_file, in)), size_l));
            } else if (*gen_bp_cmd) {
                bp.sizes = parse_int_list(sizes_text);
                text = serialize_instance(gen_binpacking(bp));
            } else {
                ropt.supply = supply_text == "inf"      ? SupplyProfile::infinite
                              : supply_text == "finite" ? SupplyProfile::finite
                                                        : SupplyProfile::mixed;
                ropt.budget = parse_limit_arg(budget_text);
                text = serialize_instance(gen_random(ropt));
            }
            write_output(out_path, text, out);
            return exit_ok;
        }
        if (*envy) {
            const Instance inst = parse_instance(read_input(file, in));
            Extension ext = Extension::empty_for(inst);
            if (!envy_verdict.empty()) {
                VerdictDocument doc = parse_verdict(inst, read_input(envy_verdict, in));
                ext = std::move(doc.extension);
            }
            print_envy_graph(inst, ext, out);
            return exit_ok;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}

} // namespace addgoods::cli
