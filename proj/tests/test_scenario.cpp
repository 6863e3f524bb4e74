#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "normbr/scenario.hpp"

using namespace scenario;

TEST_CASE("group grammar") {
    CHECK(parse_group("trivial").order() == 1);
    CHECK(parse_group("cyclic(6)").order() == 6);
    CHECK(parse_group("dihedral(4)").order() == 8);
    CHECK(parse_group("sym(3)").order() == 6);
    CHECK(parse_group("direct(cyclic(2), cyclic(3))").order() == 6);
    // Z/3 x| Z/2 with the flip acting by inversion = S_3
    groups::FiniteGroup s3 =
        parse_group("semidirect(cyclic(3), cyclic(2), [[0,1,2],[0,2,1]])");
    CHECK(s3.order() == 6);
    CHECK(!s3.is_abelian());
    CHECK(parse_group("table([[0,1],[1,0]])").order() == 2);

    CHECK_THROWS_AS(parse_group("frobnicate(3)"), ParseError);
    CHECK_THROWS_AS(parse_group("cyclic(4) junk"), ParseError);
    CHECK_THROWS_AS(parse_group("cyclic(4"), ParseError);
    try {
        parse_group("direct(cyclic(2), cyclic(2)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col == 28);
    }
}

TEST_CASE("scenario parsing") {
    Scenario sc = parse_string(
        "# a comment\n"
        "name demo\n"
        "group dihedral(3)\n"
        "variant X\n"
        "factor v=[0,1,2] e=1 l=2\n"
        "path generic\n"
        "expect V Z/3\n",
        "fallback");
    CHECK(sc.spec.name == "demo");
    CHECK(sc.spec.group.order() == 6);
    CHECK(sc.spec.variant == normic::Variant::X);
    REQUIRE(sc.spec.factors.size() == 1);
    CHECK(sc.spec.factors[0].v == std::vector<int>{0, 1, 2});
    CHECK(sc.spec.factors[0].l == 2);
    CHECK(sc.spec.components == std::vector<std::vector<int>>{{0}});
    CHECK(sc.path == normic::Path::Generic);
    REQUIRE(sc.expect.size() == 1);
    CHECK(sc.expect[0].key == "V");
    CHECK(sc.expect[0].value == "Z/3");

    CHECK_THROWS_AS(parse_string("variant X\n", "x"), ParseError);  // no group
    try {
        parse_string("group cyclic(4)\nfactor v=[0,oops]\n", "x");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col > 10);
    }
}

TEST_CASE("rendering and expectation checking") {
    Scenario sc = parse_string(
        "group dihedral(3)\nvariant X\nfactor v=[0,1,2] e=1 l=1\n"
        "expect V Z/3\nexpect W 0\nexpect exact_group Z/3\nexpect order 3\n",
        "d3");
    normic::BrauerReport rep = normic::brauer_report(sc.spec);
    CHECK(check_expectations(sc, rep).empty());

    std::string table = render_table(rep);
    CHECK(table.find("V: Z/3") != std::string::npos);
    CHECK(table.find("order: 3") != std::string::npos);
    CHECK(table.find("exact_group: Z/3") != std::string::npos);

    Scenario wrong = parse_string(
        "group dihedral(3)\nvariant X\nfactor v=[0,1,2] e=1 l=1\nexpect V Z/5\n",
        "d3");
    auto bad = check_expectations(wrong, rep);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].find("expected Z/5, got Z/3") != std::string::npos);
}

TEST_CASE("JSON reports are stable and round-trip") {
    Scenario sc = parse_string(
        "group dihedral(3)\nvariant X\nfactor v=[0,1,2] e=1 l=1\n", "d3");
    normic::BrauerReport rep = normic::brauer_report(sc.spec);
    std::string a = render_json(rep);
    std::string b = render_json(normic::brauer_report(sc.spec));
    CHECK(a == b);  // byte-stable across runs

    nlohmann::ordered_json j = nlohmann::ordered_json::parse(a);
    CHECK(j.dump(2) + "\n" == a);  // parse-then-render identity
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"name", "n", "m", "variant", "V", "W",
                                           "order", "exact_group", "generators",
                                           "cths", "notes"});
}

TEST_CASE("corpus files parse and their expectations hold") {
    // run the smallest corpus scenarios end to end through the parser
    for (const char* f :
         {"corpus/klein-two-quadratics.scn", "corpus/dihedral3-l1.scn"}) {
        CAPTURE(f);
        Scenario sc = parse_file(f);
        normic::BrauerReport rep =
            normic::brauer_report(sc.spec, sc.path.value_or(normic::Path::Shapiro));
        for (const auto& msg : check_expectations(sc, rep)) {
            CAPTURE(msg);
            CHECK(false);
        }
    }
}
