#include <catch2/catch.hpp>

#include <rexlen/io.hpp>

#include <sstream>

using namespace rexlen;

TEST_CASE("language file round trip") {
    Language l(3, {{}, {1}, {2, 3}, {3, 3, 1}});
    std::stringstream s;
    write_language(s, l);
    CHECK(read_language(s) == l);

    std::stringstream bad("alphabet 0\n");
    CHECK_THROWS_AS(read_language(bad), IoError);
    std::stringstream nohdr("1 2\n");
    CHECK_THROWS_AS(read_language(nohdr), IoError);
}

TEST_CASE("weighting file") {
    std::stringstream s("1 0\n2 1/3\n");
    Weighting mu = read_weighting(s);
    CHECK(mu.of(1) == 0);
    CHECK(mu.of(2) == mpq_class(1, 3));
    CHECK(mu.word_weight({2, 2, 1}) == mpq_class(2, 3));

    std::stringstream bad("1 x\n");
    CHECK_THROWS_AS(read_weighting(bad), IoError);
}

TEST_CASE("dfa json round trip") {
    DfaSpec d = build_family_dfa(parse_family("div:n=4,p=5"));
    nlohmann::json j = dfa_to_json(d);
    DfaSpec back = dfa_from_json(j);
    CHECK(back.states == d.states);
    CHECK(back.delta == d.delta);
    CHECK(back.finals == d.finals);

    nlohmann::json broken = j;
    broken["delta"].push_back({0, 1, 2}); // conflicts with the existing move
    CHECK_THROWS_AS(dfa_from_json(broken), IoError);
}

TEST_CASE("layered json round trip preserves the language") {
    LayeredNFA a = slice(build_family_dfa(parse_family("parity:n=4,k=2")), 4);
    nlohmann::json j = layered_to_json(a);
    LayeredNFA back = layered_from_json(j);
    CHECK(nfa_language(back) == nfa_language(a));
    CHECK(back.width() == a.width());
    CHECK(back.length() == a.length());

    nlohmann::json skip = j;
    // an edge jumping two layers ahead must be rejected
    int from = j["layers"][0][0].get<int>();
    int to = j["layers"][2][0].get<int>();
    skip["delta"].push_back({from, 1, to});
    CHECK_THROWS_AS(layered_from_json(skip), IoError);
}
