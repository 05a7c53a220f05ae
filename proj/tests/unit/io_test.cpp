// Copyright (c) addgoods contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "test_support.hpp"

using namespace addgoods;
using addgoods::testing::Builder;
using addgoods::testing::intro_instance;

namespace {

constexpr const char* intro_document = R"({
  "agents": ["a1", "a2"],
  "initial_items": {"p": {"a1": 1, "a2": 1}},
  "pool_items": {"r": {"supply": "inf", "values": {"a1": 2, "a2": 2}}},
  "initial_allocation": {"a2": ["p"]},
  "budget": "inf"
})";

std::string with(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

} // namespace

TEST_CASE("intro document") {
    const Instance inst = parse_instance(intro_document);
    CHECK(inst == intro_instance());
    CHECK(inst.pool_items()[0].supply.is_infinite());
    CHECK(inst.budget().is_infinite());
}

TEST_CASE("instance round trip") {
    const Instance inst = Builder({"x", "y", "z"})
                              .initial("p1", {0, 4, 1}, "z")
                              .initial("p2", {3, 0, 0})
                              .pool("r1", {1, 0, 2}, Limit::finite(4))
                              .pool("r0", {0, 0, 0})
                              .budget(Limit::finite(6))
                              .build();
    const std::string text = serialize_instance(inst);
    CHECK(parse_instance(text) == inst);
    CHECK(serialize_instance(parse_instance(text)) == text);
    // pool order is part of the instance
    CHECK(text.find("\"r1\"") < text.find("\"r0\""));

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        RandomInstanceOptions opt;
        opt.agents = 4;
        opt.pool = 3;
        opt.seed = seed;
        opt.supply = static_cast<SupplyProfile>(seed % 3);
        opt.budget = seed % 2 ? Limit::finite(static_cast<std::int64_t>(seed)) : Limit::infinite();
        const Instance random = gen_random(opt);
        CHECK(parse_instance(serialize_instance(random)) == random);
    }
}

TEST_CASE("instance schema errors") {
    const std::string doc = intro_document;
    CHECK_THROWS_WITH_AS(parse_instance(with(doc, R"(["a1", "a2"])", "[]")), doctest::Contains("no agents"),
                         FormatError);
    CHECK_THROWS_WITH(parse_instance(with(doc, R"("budget": "inf")", R"("budget": "inf", "extra": 1)")),
                      doctest::Contains("/extra: unknown key"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"(,
  "budget": "inf")", "")),
                      doctest::Contains("/budget: missing required key"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"("supply": "inf")", R"("supply": "lots")")),
                      doctest::Contains("/pool_items/r/supply"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"("a2": 2})", R"("a3": 2})")), doctest::Contains("unknown agent"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"("supply": "inf")", R"("supply": -1)")),
                      doctest::Contains("nonnegative"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"({"a2": ["p"]})", R"({"a1": ["p"], "a2": ["p"]})")),
                      doctest::Contains("already allocated"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"({"a2": ["p"]})", R"({"a2": ["q"]})")),
                      doctest::Contains("unknown initial item"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"("pool_items": {"r")", R"("pool_items": {"p")")),
                      doctest::Contains("also used by an initial item"));
    CHECK_THROWS_WITH(parse_instance(with(doc, R"(["a1", "a2"])", R"(["a1", "a1"])")),
                      doctest::Contains("duplicate agent id"));
    CHECK_THROWS_WITH(
        parse_instance(with(doc, R"("pool_items": {)", R"("pool_items": {"r": {"supply": 1, "values": {}}, )")),
        doctest::Contains("duplicate key"));
}

TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_WITH_AS(parse_instance("{\n  \"agents\": [\"a1\",,]\n}"), doctest::Contains("line 2"), FormatError);
    CHECK_THROWS_AS(parse_instance(""), FormatError);
    CHECK_THROWS_AS(parse_instance("[]"), FormatError);
}

TEST_CASE("verdict documents") {
    const Instance inst = Builder({"a1", "a2"}).initial("p", {1, 1}, "a2").pool("r1", {2, 2}).pool("r2", {3, 3}).build();
    Extension ext = Extension::empty_for(inst);
    const BigInt huge = BigInt(1) << 90;
    ext.set(0, 1, huge + 1);
    ext.set(1, 0, (3 * huge + 2) / 2);
    // a1 gains exactly one more than a2, which closes a1's gap of 1 without creating any
    const Verdict v = make_feasible(inst, ext, "unbounded");
    const std::string text = serialize_verdict(inst, v);
    CHECK(text.find('"' + BigInt(huge + 1).str() + '"') != std::string::npos);

    const VerdictDocument doc = parse_verdict(inst, text);
    CHECK(doc.feasible);
    CHECK(doc.mode == "unbounded");
    CHECK(doc.extension == ext);
    CHECK(doc.declared_size == ext.size());
    CHECK(doc.id_violations.empty());
    CHECK_FALSE(doc.witness.has_value());

    const Verdict no = solve_unbounded(intro_instance());
    const VerdictDocument infeasible = parse_verdict(intro_instance(), serialize_verdict(intro_instance(), no));
    CHECK_FALSE(infeasible.feasible);
    REQUIRE(infeasible.witness.has_value());
    CHECK(std::get<NegativeCycle>(*infeasible.witness).cycle == std::get<NegativeCycle>(no.witness()).cycle);
}

TEST_CASE("verdict parsing tolerates unknown ids but reports them") {
    const Instance inst = intro_instance();
    const VerdictDocument doc = parse_verdict(
        inst, R"({"feasible": true, "extension": {"a1": {"r": "1", "zz": "2"}, "a9": {"r": 3}}, "size": "6", "mode": "x"})");
    CHECK(doc.id_violations.size() == 2);
    CHECK(doc.extension.count(0, 0) == 1);
    CHECK(doc.declared_size == 6);
    CHECK_THROWS_AS(parse_verdict(inst, R"({"feasible": true, "extension": {"a1": {"r": "-1"}}, "size": "0", "mode": "x"})"),
                    FormatError);
    CHECK_THROWS_AS(parse_verdict(inst, R"({"feasible": "yes", "extension": {}, "size": "0", "mode": "x"})"),
                    FormatError);
}

TEST_CASE("graph documents") {
    const SimpleGraph c5 = SimpleGraph::cycle(5);
    const SimpleGraph back = parse_graph(serialize_graph(c5));
    CHECK(back.vertices == c5.vertices);
    CHECK(back.edges == c5.edges);
    CHECK(serialize_graph(back) == serialize_graph(c5));
    CHECK_THROWS_AS(parse_graph(R"({"vertices": ["a"], "edges": [["a", "a"]]})"), FormatError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": ["a", "b"], "edges": [["a"]]})"), FormatError);
}
