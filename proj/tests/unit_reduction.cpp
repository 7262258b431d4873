#include <catch2/catch_amalgamated.hpp>

#include "geomatch/oracle.hpp"
#include "geomatch/reduction.hpp"
#include "test_util.hpp"

using namespace geomatch;

namespace {

ManyToManyInstance one_one() {
    ManyToManyInstance inst;
    inst.s = {{0, 0}};
    inst.t = {{3, 0}};
    return inst;
}

PairSet random_cover(const ManyToManyInstance& inst, std::mt19937_64& rng) {
    PairSet m;
    for (int i = 0; i < inst.ns(); ++i) m.insert(i, static_cast<int>(rng() % inst.nt()));
    for (int j = 0; j < inst.nt(); ++j) m.insert(static_cast<int>(rng() % inst.ns()), j);
    // Sprinkle extra pairs so stars of degree > 1 appear.
    for (int k = 0; k < inst.total(); ++k)
        if (rng() % 3 == 0)
            m.insert(static_cast<int>(rng() % inst.ns()), static_cast<int>(rng() % inst.nt()));
    return m;
}

}  // namespace

TEST_CASE("reduced graph of the 1+1 instance") {
    auto g = build_reduced(one_one());
    CHECK(g.n() == 2);
    CHECK(*edge_weight(g, 0, 0) == 3.0);  // original-original
    CHECK(*edge_weight(g, 1, 1) == 0.0);  // copy clique
    CHECK(*edge_weight(g, 0, 1) == 3.0);  // S original to its copy
    CHECK(*edge_weight(g, 1, 0) == 3.0);  // T copy to its original
}

TEST_CASE("reduced graph has |S|+|T| vertices per side") {
    auto inst = testutil::uniform_instance(3, 5, 2);
    auto g = build_reduced(inst);
    CHECK(g.n() == 8);
    CHECK(g.ns() == 3);
    CHECK(g.nt() == 5);
}

TEST_CASE("copy-edge weights equal linear-scan nearest distances") {
    auto inst = testutil::uniform_instance(20, 17, 77);
    auto g = build_reduced(inst);
    for (int i = 0; i < inst.ns(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : inst.t) best = std::min(best, distance(inst.s[i], q));
        CHECK(g.nn_s_dist[i] == best);
    }
    for (int j = 0; j < inst.nt(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& p : inst.s) best = std::min(best, distance(p, inst.t[j]));
        CHECK(g.nn_t_dist[j] == best);
    }
}

TEST_CASE("edge_weight classes and absences") {
    auto inst = testutil::uniform_instance(3, 4, 5);
    auto g = build_reduced(inst);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 3; ++i) CHECK(*edge_weight(g, 3 + j, 4 + i) == 0.0);
    CHECK(*edge_weight(g, 0, 4 + 0) == g.nn_s_dist[0]);
    CHECK_FALSE(edge_weight(g, 0, 4 + 1).has_value());
    CHECK_FALSE(edge_weight(g, 3 + 2, 1).has_value());

    VertexId u{Side::R, Part::Part1, 2};
    VertexId v{Side::B, Part::Part1, 1};
    CHECK(*edge_weight(g, u, v) == 0.0);
    CHECK_THROWS_AS(edge_weight(g, v, u), std::invalid_argument);
}

TEST_CASE("single-edge star converts to a direct edge plus its shadow") {
    auto g = build_reduced(one_one());
    PairSet m;
    m.insert(0, 0);
    auto pm = cover_to_perfect(g, m);
    CHECK(pm.r_to_b[0] == 0);  // (u, v)
    CHECK(pm.r_to_b[1] == 1);  // (v-hat, u-hat)
    CHECK(matching_cost(g, pm) == 3.0);
}

TEST_CASE("s-centered star emits direct, shadow and copy edges") {
    ManyToManyInstance inst;
    inst.s = {{0, 0}};
    inst.t = {{1, 0}, {5, 0}};
    auto g = build_reduced(inst);
    PairSet m;
    m.insert(0, 0);
    m.insert(0, 1);
    auto pm = cover_to_perfect(g, m);
    CHECK(pm.r_to_b[0] == 0);      // (u, v1)
    CHECK(pm.r_to_b[1] == 2);      // (v1-hat, u-hat)
    CHECK(pm.r_to_b[2] == 1);      // (v2-hat, v2)
    CHECK(matching_cost(g, pm) <= cover_cost(inst, m));
}

TEST_CASE("random covers convert to perfect matchings of no greater cost") {
    std::mt19937_64 rng(101);
    for (int iter = 0; iter < 200; ++iter) {
        auto inst = testutil::random_instance(rng, 7);
        auto g = build_reduced(inst);
        PairSet m = random_cover(inst, rng);
        REQUIRE(is_valid_cover(inst, m));
        auto pm = cover_to_perfect(g, m);
        CHECK_NOTHROW(validate_perfect(g, pm));
        CHECK(matching_cost(g, pm) <= cover_cost(inst, m) + 1e-9);
    }
}

TEST_CASE("canonicalized covers contain no path of three edges") {
    std::mt19937_64 rng(103);
    for (int iter = 0; iter < 100; ++iter) {
        auto inst = testutil::random_instance(rng, 7);
        PairSet m = random_cover(inst, rng);
        PairSet canon = canonicalize_cover(inst, m);
        REQUIRE(is_valid_cover(inst, canon));
        std::vector<int> deg_s(inst.ns(), 0), deg_t(inst.nt(), 0);
        for (const auto& [si, ti] : canon) {
            ++deg_s[si];
            ++deg_t[ti];
        }
        for (const auto& [si, ti] : canon) {
            bool middle = deg_s[si] >= 2 && deg_t[ti] >= 2;
            CHECK_FALSE(middle);
        }
    }
}

TEST_CASE("perfect matchings convert to covers") {
    auto g = build_reduced(one_one());

    PerfectMatching direct;
    direct.r_to_b = {0, 1};
    PairSet m1 = perfect_to_cover(g, direct);
    CHECK(m1.size() == 1);
    CHECK(m1.contains(0, 0));
    CHECK(cover_cost(g.inst, m1) == matching_cost(g, direct));

    PerfectMatching copies;
    copies.r_to_b = {1, 0};  // (u, u-hat), (v-hat, v)
    PairSet m2 = perfect_to_cover(g, copies);
    CHECK(m2.size() == 1);
    CHECK(m2.contains(0, 0));
    CHECK(cover_cost(g.inst, m2) == 3.0);
    CHECK(matching_cost(g, copies) == 6.0);

    PerfectMatching broken;
    broken.r_to_b = {0, 0};
    CHECK_THROWS_AS(perfect_to_cover(g, broken), std::invalid_argument);
    CHECK_THROWS_AS(cover_to_perfect(g, PairSet{}), std::invalid_argument);
}

TEST_CASE("round-trip optimality matches the brute-force oracle") {
    std::mt19937_64 rng(107);
    for (int iter = 0; iter < 120; ++iter) {
        auto inst = testutil::random_instance(rng, 4, /*cap20=*/true);
        auto g = build_reduced(inst);
        auto [opt_pairs, opt_cost] = brute_force_cover(inst);
        auto [pm, pm_cost] = dense_hungarian(materialize(g));
        CHECK(pm_cost == Catch::Approx(opt_cost).margin(1e-9));

        // Oracle-optimal matchings convert to covers of equal cost.
        PairSet rec = perfect_to_cover(g, pm);
        REQUIRE(is_valid_cover(inst, rec));
        CHECK(cover_cost(inst, rec) == Catch::Approx(opt_cost).margin(1e-9));
    }
}
