#include <doctest.h>

#include "bnsl/bitset.hpp"
#include "bnsl/dual.hpp"
#include "bnsl/instance.hpp"
#include "testutil.hpp"

using namespace bnsl;
using testutil::makeSet;

TEST_CASE("bitset basics") {
    VarSet s;
    CHECK(s.empty());
    s.insert(3);
    s.insert(17);
    CHECK(s.count() == 2);
    CHECK(s.contains(3));
    CHECK(!s.contains(4));
    CHECK(s.lowest() == 3);
    CHECK(s.highest() == 17);
    CHECK(s.subsetOf(makeSet({1, 3, 17, 20})));
    CHECK(!makeSet({1, 3}).subsetOf(s));
    CHECK(s.intersects(makeSet({17})));
    CHECK(!s.intersects(makeSet({16, 18})));
    CHECK((s - makeSet({3})) == makeSet({17}));
    CHECK(VarSet::firstN(4) == makeSet({0, 1, 2, 3}));

    std::vector<unsigned> members;
    for (unsigned v : s) members.push_back(v);
    CHECK(members == std::vector<unsigned>{3, 17});
}

TEST_CASE("wide bitset variant") {
    using Wide = FixedBitset<16>;
    Wide s;
    s.insert(0);
    s.insert(64);
    s.insert(1023);
    CHECK(s.count() == 3);
    CHECK(s.highest() == 1023);
    CHECK(s.lowest() == 0);
    Wide t = s;
    t.erase(64);
    CHECK(t.subsetOf(s));
    CHECK(!s.subsetOf(t));
    CHECK(t.numericLess(s));
    std::vector<unsigned> members;
    for (unsigned v : s) members.push_back(v);
    CHECK(members == std::vector<unsigned>{0, 64, 1023});
}

TEST_CASE("table 1 parses with expected shape") {
    Instance inst = testutil::table1();
    CHECK(inst.numVars() == 5);
    CHECK(inst.domain(0).size() == 1);
    CHECK(inst.domain(1).size() == 2);
    CHECK(inst.domain(2).size() == 2);
    CHECK(inst.domain(3).size() == 2);
    CHECK(inst.domain(4).size() == 4);
    for (VariableId v = 0; v < 5; ++v) CHECK(inst.domain(v).front().score == 0.0);
    CHECK(inst.domain(0)[0].parents == makeSet({2}));
    CHECK(inst.domain(4)[0].parents == makeSet({2, 3}));
    CHECK(inst.domain(4)[3].parents == VarSet());
    CHECK(inst.everyVarHasEmptyValue() == false);  // variable 0 has no {}
}

TEST_CASE("smallest legal instance") {
    Instance inst = parseScores("1\nx 1\n0.0 0\n", ScoreConvention::Cost);
    CHECK(inst.numVars() == 1);
    CHECK(inst.domain(0).size() == 1);
    CHECK(inst.domain(0)[0].parents.empty());
    CHECK(inst.domain(0)[0].score == 0.0);
}

TEST_CASE("log-likelihood normalization preserves the argmax") {
    // Larger is better in the input; each variable's best value must end
    // at cost 0 with all other costs positive.
    std::string text =
        "3\n"
        "a 2\n"
        "-12.5 0\n"
        "-10.25 1 b\n"
        "b 2\n"
        "-7.0 0\n"
        "-9.5 1 c\n"
        "c 1\n"
        "-3.0 0\n";
    Instance inst = parseScores(text, ScoreConvention::LogLikelihood);
    CHECK(inst.domain(0).front().parents == makeSet({1}));
    CHECK(inst.domain(0).front().score == 0.0);
    CHECK(inst.domain(0)[1].score == doctest::Approx(2.25));
    CHECK(inst.domain(1).front().parents == VarSet());
    CHECK(inst.domain(1).front().score == 0.0);
    CHECK(inst.domain(1)[1].score == doctest::Approx(2.5));
    CHECK(inst.domain(2).front().score == 0.0);
}

TEST_CASE("normalization keeps the best parent set per variable") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> rawScore(-500.0, -1.0);
    for (int i = 0; i < 30; ++i) {
        // Raw maximization-convention domains with negative log scores.
        testutil::RandomInstanceOptions opt;
        opt.numVars = 3 + i % 4;
        Instance shape = testutil::randomInstance(rng, opt);
        std::vector<std::string> names(shape.names());
        std::vector<std::vector<ScoredValue>> raw(shape.numVars());
        for (VariableId v = 0; v < shape.numVars(); ++v)
            for (const auto& val : shape.domain(v)) raw[v].push_back({val.parents, rawScore(rng)});

        std::vector<VarSet> rawBest(shape.numVars());
        for (VariableId v = 0; v < shape.numVars(); ++v) {
            double best = -1e300;
            for (const auto& val : raw[v])
                if (val.score > best) {
                    best = val.score;
                    rawBest[v] = val.parents;
                }
        }

        Instance normalized = Instance::build(std::move(names), std::move(raw),
                                              ScoreConvention::LogLikelihood);
        for (VariableId v = 0; v < normalized.numVars(); ++v) {
            CHECK(normalized.domain(v).front().score == 0.0);
            CHECK(normalized.domain(v).front().parents == rawBest[v]);
            for (const auto& val : normalized.domain(v)) CHECK(val.score >= 0.0);
        }
    }
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parseScores("", ScoreConvention::Cost), ParseError);
    CHECK_THROWS_AS(parseScores("1\nx 1\n0.0 1 y\n", ScoreConvention::Cost), ParseError);
    CHECK_THROWS_AS(parseScores("1\nx 1\n0.0 1 x\n", ScoreConvention::Cost), ParseError);
    CHECK_THROWS_AS(
        parseScores("1\nx 2\n0.0 0\n1.0 0\n", ScoreConvention::Cost), ParseError);
    CHECK_THROWS_AS(parseScores("1\nx 1\nnope 0\n", ScoreConvention::Cost), ParseError);
    CHECK_THROWS_AS(parseScores("1\nx 1\n-1.0 0\n", ScoreConvention::Cost), ParseError);
    CHECK_THROWS_AS(parseScores("2\nx 1\n0.0 0\n", ScoreConvention::Cost), ParseError);
    CHECK_THROWS_AS(parseScores("1\nx 1\n0.0 0\nextra\n", ScoreConvention::Cost), ParseError);

    try {
        parseScores("2\na 1\n0.0 1 zz\nb 1\n0.0 0\n", ScoreConvention::Cost);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("round trip: parse, write, parse") {
    Instance a = testutil::table1();
    Instance b = parseScores(writeScores(a), ScoreConvention::Cost);
    CHECK(a == b);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 25; ++i) {
        testutil::RandomInstanceOptions opt;
        opt.numVars = 2 + i % 6;
        Instance x = testutil::randomInstance(rng, opt);
        Instance y = parseScores(writeScores(x), ScoreConvention::Cost);
        CHECK(x == y);
    }
}

TEST_CASE("domains are sorted ascending with deterministic ties") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 25; ++i) {
        testutil::RandomInstanceOptions opt;
        opt.numVars = 4;
        opt.maxScore = 3;  // force score ties
        Instance inst = testutil::randomInstance(rng, opt);
        for (VariableId v = 0; v < inst.numVars(); ++v) {
            const auto& dom = inst.domain(v);
            for (size_t k = 1; k < dom.size(); ++k) {
                CHECK(dom[k - 1].score <= dom[k].score);
                if (dom[k - 1].score == dom[k].score)
                    CHECK(dom[k - 1].parents.numericLess(dom[k].parents));
            }
        }
    }
}

TEST_CASE("restrict keeps matching values and reports wipeout") {
    Instance inst = testutil::table1();
    DomainState full = DomainState::full(inst);

    SUBCASE("identity predicate") {
        auto same = restrictDomain(inst, full, 1, [](const ScoredValue&) { return true; });
        REQUIRE(same.has_value());
        CHECK(*same == full);
    }
    SUBCASE("all of variable 4 fits within {2,3}") {
        VarSet allowed = makeSet({2, 3});
        auto r = restrictDomain(inst, full, 4, [&](const ScoredValue& val) {
            return val.parents.subsetOf(allowed);
        });
        REQUIRE(r.has_value());
        CHECK(r->live[4].size() == 4);
    }
    SUBCASE("variable 0 wipes out when restricted to the empty set") {
        auto r = restrictDomain(inst, full, 0, [](const ScoredValue& val) {
            return val.parents.empty();
        });
        CHECK(!r.has_value());
    }
}

TEST_CASE("sum of domain minima equals the empty-pool dual bound") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        testutil::RandomInstanceOptions opt;
        opt.numVars = 3 + i % 4;
        Instance inst = testutil::randomInstance(rng, opt);
        DomainState full = DomainState::full(inst);
        double minSum = 0.0;
        for (VariableId v = 0; v < inst.numVars(); ++v)
            minSum += inst.domain(v).front().score;
        DualState dual = dualInit(inst, full);
        CHECK(dual.bound == doctest::Approx(minSum).epsilon(1e-12));
    }
}
