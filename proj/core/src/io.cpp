// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include "addgoods/io.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace addgoods {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw FormatError((path.empty() ? std::string("/") : path) + ": " + what);
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

// nlohmann keeps the last of two equal keys; reject them instead.
Json parse_json(std::string_view text) {
    std::vector<std::set<std::string>> open_objects;
    std::string duplicate;
    Json::parser_callback_t track = [&](int, Json::parse_event_t event, Json& parsed) {
        switch (event) {
        case Json::parse_event_t::object_start:
            open_objects.emplace_back();
            break;
        case Json::parse_event_t::object_end:
            open_objects.pop_back();
            break;
        case Json::parse_event_t::key:
            if (!open_objects.back().insert(parsed.get<std::string>()).second && duplicate.empty()) {
                duplicate = parsed.get<std::string>();
            }
            break;
        default:
            break;
        }
        return true;
    };
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end(), track);
    } catch (const Json::parse_error& e) {
        throw FormatError("invalid JSON at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
    if (!duplicate.empty()) {
        throw FormatError("duplicate key \"" + duplicate + "\"");
    }
    return doc;
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

const Json& require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    return j;
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed,
               std::initializer_list<std::string_view> required) {
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(child(path, key), "unknown key");
        }
    }
    for (auto key : required) {
        if (!j.contains(std::string(key))) {
            fail(child(path, std::string(key)), "missing required key");
        }
    }
}

std::int64_t nonnegative_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        fail(path, "expected a nonnegative integer");
    }
    if (j.is_number_unsigned()) {
        if (j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            fail(path, "integer does not fit in 64 bits");
        }
        return static_cast<std::int64_t>(j.get<std::uint64_t>());
    }
    const auto v = j.get<std::int64_t>();
    if (v < 0) {
        fail(path, "expected a nonnegative integer");
    }
    return v;
}

Limit parse_limit(const Json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() != "inf") {
            fail(path, "expected a nonnegative integer or \"inf\"");
        }
        return Limit::infinite();
    }
    return Limit::finite(nonnegative_integer(j, path));
}

Json limit_json(const Limit& l) { return l.is_infinite() ? Json("inf") : Json(l.value()); }

std::vector<Value> parse_values(const Json& j, const std::string& path,
                                const std::unordered_map<std::string, AgentIndex>& agents) {
    require_object(j, path);
    std::vector<Value> out(agents.size(), 0);
    for (const auto& [agent, value] : j.items()) {
        auto it = agents.find(agent);
        if (it == agents.end()) {
            fail(child(path, agent), "unknown agent");
        }
        out[it->second] = nonnegative_integer(value, child(path, agent));
    }
    return out;
}

Json values_json(const Instance& inst, const std::vector<Value>& values) {
    Json out = Json::object();
    for (AgentIndex a = 0; a < values.size(); ++a) {
        if (values[a] != 0) {
            out[inst.agent_id(a)] = values[a];
        }
    }
    return out;
}

BigInt parse_count(const Json& j, const std::string& path) {
    if (j.is_number_integer()) {
        return nonnegative_integer(j, path);
    }
    if (!j.is_string()) {
        fail(path, "expected a decimal string");
    }
    const auto s = j.get<std::string>();
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        fail(path, "expected a decimal string of digits");
    }
    return BigInt(s);
}

Json witness_json(const Instance& inst, const Witness& witness) {
    return std::visit(
        [&](const auto& w) -> Json {
            using W = std::decay_t<decltype(w)>;
            Json out;
            if constexpr (std::is_same_v<W, ZeroAgentEnvy>) {
                out["kind"] = "zero_agent_envy";
                out["agent"] = inst.agent_id(w.agent);
                out["envied"] = inst.agent_id(w.envied);
                out["gap"] = w.gap.str();
            } else if constexpr (std::is_same_v<W, NegativeCycle>) {
                out["kind"] = "negative_cycle";
                out["class"] = Json::array();
                for (AgentIndex a : w.class_members) {
                    out["class"].push_back(inst.agent_id(a));
                }
                out["cycle"] = Json::array();
                for (AgentIndex a : w.cycle) {
                    out["cycle"].push_back(inst.agent_id(a));
                }
            } else {
                out["kind"] = "search_exhausted";
                out["detail"] = w.detail;
            }
            return out;
        },
        witness);
}

std::string string_at(const Json& j, const std::string& path) {
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

AgentIndex agent_at(const Instance& inst, const Json& j, const std::string& path) {
    auto a = inst.find_agent(string_at(j, path));
    if (!a) {
        fail(path, "unknown agent");
    }
    return *a;
}

std::vector<AgentIndex> agent_list(const Instance& inst, const Json& j, const std::string& path) {
    if (!j.is_array()) {
        fail(path, "expected an array of agent ids");
    }
    std::vector<AgentIndex> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(agent_at(inst, j[i], child(path, std::to_string(i))));
    }
    return out;
}

Witness parse_witness(const Instance& inst, const Json& j, const std::string& path) {
    require_object(j, path);
    if (!j.contains("kind")) {
        fail(child(path, "kind"), "missing required key");
    }
    const std::string kind = string_at(j["kind"], child(path, "kind"));
    if (kind == "zero_agent_envy") {
        only_keys(j, path, {"kind", "agent", "envied", "gap"}, {"agent", "envied", "gap"});
        return ZeroAgentEnvy{agent_at(inst, j["agent"], child(path, "agent")),
                             agent_at(inst, j["envied"], child(path, "envied")),
                             parse_count(j["gap"], child(path, "gap"))};
    }
    if (kind == "negative_cycle") {
        only_keys(j, path, {"kind", "class", "cycle"}, {"class", "cycle"});
        return NegativeCycle{agent_list(inst, j["class"], child(path, "class")),
                             agent_list(inst, j["cycle"], child(path, "cycle"))};
    }
    if (kind == "search_exhausted") {
        only_keys(j, path, {"kind", "detail"}, {});
        return SearchExhausted{j.contains("detail") ? string_at(j["detail"], child(path, "detail")) : ""};
    }
    fail(child(path, "kind"), "unknown witness kind \"" + kind + "\"");
}

} // namespace

Instance parse_instance(std::string_view text) {
    const Json doc = parse_json(text);
    require_object(doc, "");
    only_keys(doc, "", {"agents", "initial_items", "pool_items", "initial_allocation", "budget"},
              {"agents", "initial_items", "pool_items", "initial_allocation", "budget"});

    const Json& agents_json = doc["agents"];
    if (!agents_json.is_array()) {
        fail("/agents", "expected an array of strings");
    }
    if (agents_json.empty()) {
        fail("/agents", "no agents");
    }
    std::vector<std::string> agents;
    std::unordered_map<std::string, AgentIndex> agent_index;
    for (std::size_t i = 0; i < agents_json.size(); ++i) {
        const std::string id = string_at(agents_json[i], "/agents/" + std::to_string(i));
        if (!agent_index.emplace(id, agents.size()).second) {
            fail("/agents/" + std::to_string(i), "duplicate agent id \"" + id + "\"");
        }
        agents.push_back(id);
    }

    std::set<std::string> item_ids;
    std::vector<InitialItem> initial;
    std::unordered_map<std::string, ItemIndex> initial_index;
    require_object(doc["initial_items"], "/initial_items");
    for (const auto& [id, values] : doc["initial_items"].items()) {
        item_ids.insert(id);
        initial_index.emplace(id, initial.size());
        initial.push_back({id, parse_values(values, child("/initial_items", id), agent_index)});
    }

    std::vector<PoolItem> pool;
    require_object(doc["pool_items"], "/pool_items");
    for (const auto& [id, body] : doc["pool_items"].items()) {
        const std::string path = child("/pool_items", id);
        if (!item_ids.insert(id).second) {
            fail(path, "item id also used by an initial item");
        }
        require_object(body, path);
        only_keys(body, path, {"supply", "values"}, {"supply", "values"});
        pool.push_back({id, parse_limit(body["supply"], child(path, "supply")),
                        parse_values(body["values"], child(path, "values"), agent_index)});
    }

    std::vector<std::vector<ItemIndex>> allocation(agents.size());
    std::vector<bool> held(initial.size(), false);
    require_object(doc["initial_allocation"], "/initial_allocation");
    for (const auto& [agent, bundle] : doc["initial_allocation"].items()) {
        const std::string path = child("/initial_allocation", agent);
        auto a = agent_index.find(agent);
        if (a == agent_index.end()) {
            fail(path, "unknown agent");
        }
        if (!bundle.is_array()) {
            fail(path, "expected an array of initial item ids");
        }
        for (std::size_t i = 0; i < bundle.size(); ++i) {
            const std::string item_path = child(path, std::to_string(i));
            const std::string item = string_at(bundle[i], item_path);
            auto it = initial_index.find(item);
            if (it == initial_index.end()) {
                fail(item_path, "unknown initial item \"" + item + "\"");
            }
            if (held[it->second]) {
                fail(item_path, "initial item \"" + item + "\" is already allocated");
            }
            held[it->second] = true;
            allocation[a->second].push_back(it->second);
        }
    }

    const Limit budget = parse_limit(doc["budget"], "/budget");
    try {
        return Instance(std::move(agents), std::move(initial), std::move(pool), std::move(allocation), budget);
    } catch (const ModelError& e) {
        throw FormatError(std::string("/: ") + e.what());
    }
}

std::string serialize_instance(const Instance& inst) {
    Json doc;
    doc["agents"] = inst.agents();
    doc["initial_items"] = Json::object();
    for (const auto& item : inst.initial_items()) {
        doc["initial_items"][item.id] = values_json(inst, item.values);
    }
    doc["pool_items"] = Json::object();
    for (const auto& item : inst.pool_items()) {
        Json body;
        body["supply"] = limit_json(item.supply);
        body["values"] = values_json(inst, item.values);
        doc["pool_items"][item.id] = std::move(body);
    }
    doc["initial_allocation"] = Json::object();
    for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
        if (inst.allocation()[a].empty()) {
            continue;
        }
        Json bundle = Json::array();
        for (ItemIndex i : inst.allocation()[a]) {
            bundle.push_back(inst.initial_items()[i].id);
        }
        doc["initial_allocation"][inst.agent_id(a)] = std::move(bundle);
    }
    doc["budget"] = limit_json(inst.budget());
    return doc.dump(2) + "\n";
}

std::string serialize_verdict(const Instance& inst, const Verdict& verdict) {
    Json doc;
    doc["feasible"] = verdict.feasible();
    doc["extension"] = Json::object();
    BigInt size = 0;
    if (verdict.feasible()) {
        const Extension& ext = verdict.extension();
        for (AgentIndex a = 0; a < ext.agent_count(); ++a) {
            Json counts = Json::object();
            for (ItemIndex r = 0; r < ext.item_count(); ++r) {
                if (ext.count(a, r) != 0) {
                    counts[inst.pool_items()[r].id] = ext.count(a, r).str();
                }
            }
            if (!counts.empty()) {
                doc["extension"][inst.agent_id(a)] = std::move(counts);
            }
        }
        size = ext.size();
    }
    doc["size"] = size.str();
    if (!verdict.feasible()) {
        doc["witness"] = witness_json(inst, verdict.witness());
    }
    doc["mode"] = verdict.mode;
    return doc.dump(2) + "\n";
}

VerdictDocument parse_verdict(const Instance& inst, std::string_view text) {
    const Json doc = parse_json(text);
    require_object(doc, "");
    only_keys(doc, "", {"feasible", "extension", "size", "witness", "mode"}, {"feasible", "extension", "size", "mode"});

    VerdictDocument out;
    if (!doc["feasible"].is_boolean()) {
        fail("/feasible", "expected a boolean");
    }
    out.feasible = doc["feasible"].get<bool>();
    out.mode = string_at(doc["mode"], "/mode");
    out.declared_size = parse_count(doc["size"], "/size");
    out.extension = Extension::empty_for(inst);

    require_object(doc["extension"], "/extension");
    for (const auto& [agent, counts] : doc["extension"].items()) {
        const std::string path = child("/extension", agent);
        require_object(counts, path);
        auto a = inst.find_agent(agent);
        if (!a) {
            out.id_violations.push_back({Violation::Kind::unknown_id, "unknown agent " + agent});
        }
        for (const auto& [item, count] : counts.items()) {
            BigInt c = parse_count(count, child(path, item));
            auto r = inst.find_pool_item(item);
            if (!r) {
                out.id_violations.push_back({Violation::Kind::unknown_id, "unknown pool item " + item});
                continue;
            }
            if (a) {
                out.extension.add(*a, *r, c);
            }
        }
    }
    if (doc.contains("witness")) {
        out.witness = parse_witness(inst, doc["witness"], "/witness");
    }
    return out;
}

SimpleGraph parse_graph(std::string_view text) {
    const Json doc = parse_json(text);
    require_object(doc, "");
    only_keys(doc, "", {"vertices", "edges"}, {"vertices", "edges"});
    SimpleGraph g;
    if (!doc["vertices"].is_array()) {
        fail("/vertices", "expected an array of strings");
    }
    for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
        g.vertices.push_back(string_at(doc["vertices"][i], "/vertices/" + std::to_string(i)));
    }
    if (!doc["edges"].is_array()) {
        fail("/edges", "expected an array of vertex pairs");
    }
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
        const std::string path = "/edges/" + std::to_string(i);
        const Json& e = doc["edges"][i];
        if (!e.is_array() || e.size() != 2) {
            fail(path, "expected a pair of vertex ids");
        }
        g.edges.emplace_back(string_at(e[0], path + "/0"), string_at(e[1], path + "/1"));
    }
    try {
        g.validate();
    } catch (const ModelError& e) {
        throw FormatError(std::string("/: ") + e.what());
    }
    return g;
}

std::string serialize_graph(const SimpleGraph& graph) {
    Json doc;
    doc["vertices"] = graph.vertices;
    doc["edges"] = Json::array();
    for (const auto& [u, v] : graph.edges) {
        doc["edges"].push_back(Json::array({u, v}));
    }
    return doc.dump(2) + "\n";
}

} // namespace addgoods
