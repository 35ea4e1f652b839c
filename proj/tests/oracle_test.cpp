#include <doctest.h>

#include <random>

#include "bnsl/oracle.hpp"
#include "testutil.hpp"

using namespace bnsl;
using testutil::makeSet;

TEST_CASE("brute force on the running example") {
    Instance inst = testutil::table1();
    auto best = bruteForceOptimum(inst);
    REQUIRE(best.has_value());
    CHECK(best->cost == 10.0);
}

TEST_CASE("brute force on a two-variable instance") {
    // a: {}:0; b: {}:5 or {a}:1 -> order (a,b) gives cost 1.
    std::vector<std::vector<ScoredValue>> domains(2);
    domains[0].push_back({VarSet(), 0.0});
    domains[1].push_back({VarSet(), 5.0});
    domains[1].push_back({makeSet({0}), 1.0});
    Instance inst = Instance::build({"a", "b"}, std::move(domains), ScoreConvention::Cost);
    auto best = bruteForceOptimum(inst);
    REQUIRE(best.has_value());
    CHECK(best->cost == 1.0);
    CHECK(best->parents[1] == makeSet({0}));
}

TEST_CASE("empty-set-only instances cost the sum of minima") {
    std::vector<std::vector<ScoredValue>> domains(3);
    domains[0].push_back({VarSet(), 2.0});
    domains[1].push_back({VarSet(), 3.0});
    domains[2].push_back({VarSet(), 4.0});
    Instance inst =
        Instance::build({"a", "b", "c"}, std::move(domains), ScoreConvention::Cost);
    auto best = bruteForceOptimum(inst);
    REQUIRE(best.has_value());
    CHECK(best->cost == 9.0);
}

TEST_CASE("brute force refuses oversized instances") {
    std::vector<std::string> names;
    std::vector<std::vector<ScoredValue>> domains(11);
    for (unsigned v = 0; v < 11; ++v) {
        names.push_back("v" + std::to_string(v));
        domains[v].push_back({VarSet(), 0.0});
    }
    Instance inst = Instance::build(std::move(names), std::move(domains), ScoreConvention::Cost);
    CHECK_THROWS_AS(bruteForceOptimum(inst), std::invalid_argument);
}

TEST_CASE("violated cluster enumeration on the running example") {
    Instance inst = testutil::table1();

    SUBCASE("zero-cost restriction contains the example clusters") {
        DomainState restricted = DomainState::full(inst);
        for (VariableId v = 0; v < inst.numVars(); ++v) {
            std::vector<uint32_t> kept;
            for (uint32_t idx : restricted.live[v])
                if (inst.domain(v)[idx].score == 0.0) kept.push_back(idx);
            restricted.live[v] = kept;
        }
        auto violated = enumerateViolatedClusters(inst, restricted);
        bool has12 = false, has023 = false;
        for (const auto& c : violated) {
            has12 = has12 || c == makeSet({1, 2});
            has023 = has023 || c == makeSet({0, 2, 3});
        }
        CHECK(has12);
        CHECK(has023);
    }

    SUBCASE("full domains do not violate {0,2,3}") {
        auto violated = enumerateViolatedClusters(inst, DomainState::full(inst));
        for (const auto& c : violated) CHECK(c != makeSet({0, 2, 3}));
    }
}

TEST_CASE("satisfiable restrictions have no violated clusters") {
    std::mt19937_64 rng(127);
    for (int i = 0; i < 100; ++i) {
        testutil::RandomInstanceOptions opt;
        opt.numVars = 3 + i % 5;
        Instance inst = testutil::randomInstance(rng, opt);  // empty set present
        DomainState full = DomainState::full(inst);
        CHECK(enumerateViolatedClusters(inst, full).empty());
    }
}

TEST_CASE("completion oracle respects outside parents") {
    Instance inst = testutil::table1();
    DomainState full = DomainState::full(inst);
    // Completing {0} alone: 0 may use 2 freely, cost 0.
    auto c0 = bruteForceCompletion(inst, full, makeSet({0}));
    REQUIRE(c0.has_value());
    CHECK(*c0 == 0.0);
    // Completing {1,2}: one of them must pay its empty set, cheapest is 6.
    auto c12 = bruteForceCompletion(inst, full, makeSet({1, 2}));
    REQUIRE(c12.has_value());
    CHECK(*c12 == 6.0);
    // Completing everything equals the global optimum.
    auto call = bruteForceCompletion(inst, full, inst.allVars());
    REQUIRE(call.has_value());
    CHECK(*call == 10.0);
}
