#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "adtsched/adt.hpp"
#include "helpers.hpp"

using namespace adtsched;

namespace {

Adt leaf_pair(GateKind root_kind) {
    Adt adt;
    AdtNode a{"a", GateKind::Leaf, Side::Attack, 2, 0, {}, ""};
    AdtNode b{"b", GateKind::Leaf, Side::Attack, 4, 0, {}, ""};
    AdtNode g{"g", root_kind, Side::Attack, 0, 0, {"a", "b"}, ""};
    adt.add_node(a);
    adt.add_node(b);
    adt.add_node(g);
    adt.set_root("g");
    return adt;
}

bool has_rule(const std::vector<Violation>& vs, ViolationRule r) {
    for (const Violation& v : vs)
        if (v.rule == r) return true;
    return false;
}

}  // namespace

TEST_CASE("valid AND tree has no violations") {
    Adt adt = leaf_pair(GateKind::And);
    CHECK(validate(adt).empty());
}

TEST_CASE("treasure hunters fixture validates") {
    Adt adt = testutil::load_tree("treasure_hunters.adt");
    CHECK(validate(adt).empty());
    CHECK(adt.size() == 9);
    CHECK(adt.root() == "TS");
    CHECK(adt.node("TS").kind == GateKind::Cand);
    CHECK(adt.node("p").side == Side::Defence);
}

TEST_CASE("And gate with one child is an arity violation") {
    Adt adt;
    adt.add_node({"a", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.add_node({"g", GateKind::And, Side::Attack, 0, 0, {"a"}, ""});
    adt.set_root("g");
    auto vs = validate(adt);
    REQUIRE(vs.size() >= 1);
    CHECK(has_rule(vs, ViolationRule::ArityViolation));
    CHECK(vs.front().node == "g");
}

TEST_CASE("countering gates take exactly two children") {
    Adt adt;
    adt.add_node({"a", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.add_node({"d", GateKind::Leaf, Side::Defence, 1, 0, {}, ""});
    adt.add_node({"x", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.add_node({"g", GateKind::Cand, Side::Attack, 0, 0, {"a", "d", "x"}, ""});
    adt.set_root("g");
    CHECK(has_rule(validate(adt), ViolationRule::ArityViolation));
}

TEST_CASE("unknown child and unknown root are reported") {
    Adt adt;
    adt.add_node({"g", GateKind::And, Side::Attack, 0, 0, {"a", "b"}, ""});
    adt.set_root("nope");
    auto vs = validate(adt);
    CHECK(has_rule(vs, ViolationRule::UnknownRoot));
    CHECK(has_rule(vs, ViolationRule::UnknownChild));
}

TEST_CASE("shared subtrees are rejected") {
    Adt adt;
    adt.add_node({"a", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.add_node({"b", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.add_node({"g", GateKind::And, Side::Attack, 0, 0, {"a", "b"}, ""});
    adt.add_node({"h", GateKind::Or, Side::Attack, 0, 0, {"g", "a"}, ""});
    adt.set_root("h");
    CHECK(has_rule(validate(adt), ViolationRule::MultipleParents));
}

TEST_CASE("cycles are reported") {
    Adt adt;
    adt.add_node({"g", GateKind::And, Side::Attack, 0, 0, {"h", "a"}, ""});
    adt.add_node({"h", GateKind::Or, Side::Attack, 0, 0, {"g", "a"}, ""});
    adt.add_node({"a", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.set_root("g");
    CHECK(has_rule(validate(adt), ViolationRule::Cycle));
}

TEST_CASE("a defence leaf under a plain attack gate mismatches sides") {
    Adt adt;
    adt.add_node({"a", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.add_node({"d", GateKind::Leaf, Side::Defence, 1, 0, {}, ""});
    adt.add_node({"g", GateKind::And, Side::Attack, 0, 0, {"a", "d"}, ""});
    adt.set_root("g");
    CHECK(has_rule(validate(adt), ViolationRule::SideMismatch));
}

TEST_CASE("countering gate inside a defence subtree is rejected") {
    Adt adt;
    adt.add_node({"a", GateKind::Leaf, Side::Attack, 1, 0, {}, ""});
    adt.add_node({"x", GateKind::Leaf, Side::Defence, 1, 0, {}, ""});
    adt.add_node({"y", GateKind::Leaf, Side::Defence, 1, 0, {}, ""});
    adt.add_node({"cd", GateKind::Cand, Side::Defence, 0, 0, {"x", "y"}, ""});
    adt.add_node({"g", GateKind::Cand, Side::Attack, 0, 0, {"a", "cd"}, ""});
    adt.set_root("g");
    CHECK(has_rule(validate(adt), ViolationRule::CounterInDefence));
}

TEST_CASE("time_unit is the gcd of the non-zero durations") {
    Adt adt = leaf_pair(GateKind::And);  // durations 2 and 4
    CHECK(time_unit(adt) == 2);
    adt.node("a").duration = 6;
    adt.node("b").duration = 10;
    adt.node("g").duration = 15;
    CHECK(time_unit(adt) == 1);
    Adt treasure = testutil::load_tree("treasure_hunters.adt");
    CHECK(time_unit(treasure) == 1);
}

TEST_CASE("time_unit rejects all-zero durations") {
    Adt adt = leaf_pair(GateKind::And);
    adt.node("a").duration = 0;
    adt.node("b").duration = 0;
    CHECK_THROWS_AS(time_unit(adt), AllZeroDurations);
}

TEST_CASE("derive_sides marks the second child of countering gates") {
    Adt adt = testutil::load_tree("treasure_hunters.adt");
    adt.node("p").side = Side::Attack;  // scramble
    derive_sides(adt);
    CHECK(adt.node("p").side == Side::Defence);
    CHECK(adt.node("TF").side == Side::Attack);
}

TEST_CASE("time_unit divides every duration (property)") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        testutil::RandomTreeGen gen(seed);
        Adt adt = gen.generate();
        long long unit = time_unit(adt);
        for (const AdtNode& n : adt.nodes()) {
            INFO("seed ", seed, " node ", n.id);
            CHECK(n.duration % unit == 0);
        }
    }
}
