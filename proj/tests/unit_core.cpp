#include <catch2/catch_amalgamated.hpp>

#include "geomatch/core.hpp"
#include "geomatch/io.hpp"
#include "test_util.hpp"

using namespace geomatch;

TEST_CASE("distance basics") {
    CHECK(distance({0, 0}, {3, 4}) == 5.0);
    CHECK(distance({1, 1}, {1, 1}) == 0.0);
    CHECK(distance({0, 0}, {1, 1}) == Catch::Approx(1.4142135623730951).epsilon(1e-15));
}

TEST_CASE("distance is symmetric, nonnegative and satisfies the triangle inequality") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 2000; ++iter) {
        Point a{detail::uniform01(rng) * 10 - 5, detail::uniform01(rng) * 10 - 5};
        Point b{detail::uniform01(rng) * 10 - 5, detail::uniform01(rng) * 10 - 5};
        Point c{detail::uniform01(rng) * 10 - 5, detail::uniform01(rng) * 10 - 5};
        CHECK(distance(a, b) == distance(b, a));
        CHECK(distance(a, b) >= 0.0);
        CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
    }
}

TEST_CASE("is_valid_cover") {
    ManyToManyInstance inst;
    inst.s = {{0, 0}};
    inst.t = {{1, 0}, {2, 0}};

    PairSet partial;
    partial.insert(0, 0);
    CHECK_FALSE(is_valid_cover(inst, partial));

    PairSet full;
    full.insert(0, 0);
    full.insert(0, 1);
    CHECK(is_valid_cover(inst, full));

    CHECK_FALSE(is_valid_cover(inst, PairSet{}));

    PairSet bad;
    bad.insert(0, 7);
    CHECK_THROWS_AS(is_valid_cover(inst, bad), std::invalid_argument);
}

TEST_CASE("cover_cost") {
    ManyToManyInstance inst;
    inst.s = {{0, 0}};
    inst.t = {{3, 0}, {4, 0}};

    PairSet both;
    both.insert(0, 0);
    both.insert(0, 1);
    CHECK(cover_cost(inst, both) == 7.0);

    PairSet dup;
    dup.insert(0, 0);
    dup.insert(0, 0);
    CHECK(dup.size() == 1);
    CHECK(cover_cost(inst, dup) == 3.0);

    PairSet single;
    single.insert(0, 1);
    CHECK(cover_cost(inst, single) == 4.0);
}

TEST_CASE("cover_cost is monotone under pair insertion") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        auto inst = testutil::random_instance(rng, 6);
        PairSet m;
        double prev = 0.0;
        for (int k = 0; k < 10; ++k) {
            m.insert(static_cast<int>(rng() % inst.ns()), static_cast<int>(rng() % inst.nt()));
            double cur = cover_cost(inst, m);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
}

TEST_CASE("full bipartite pair set always covers") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 20; ++iter) {
        auto inst = testutil::random_instance(rng, 5);
        PairSet all;
        for (int i = 0; i < inst.ns(); ++i)
            for (int j = 0; j < inst.nt(); ++j) all.insert(i, j);
        CHECK(is_valid_cover(inst, all));
    }
}

TEST_CASE("generate is deterministic per seed") {
    GenSpec spec;
    spec.dist = Distribution::UniformSquare;
    spec.ns = 3;
    spec.nt = 3;
    spec.seed = 1;
    auto a = generate(spec);
    auto b = generate(spec);
    REQUIRE(a.ns() == b.ns());
    for (int i = 0; i < a.ns(); ++i) {
        CHECK(a.s[i].x == b.s[i].x);
        CHECK(a.s[i].y == b.s[i].y);
    }
    for (int j = 0; j < a.nt(); ++j) {
        CHECK(a.t[j].x == b.t[j].x);
        CHECK(a.t[j].y == b.t[j].y);
    }
}

TEST_CASE("grid generation yields distinct lattice points") {
    GenSpec spec;
    spec.dist = Distribution::Grid;
    spec.ns = 4;
    spec.nt = 4;
    spec.seed = 99;
    auto inst = generate(spec);
    std::set<std::pair<double, double>> seen;
    for (const Point& p : inst.s) seen.insert({p.x, p.y});
    for (const Point& p : inst.t) seen.insert({p.x, p.y});
    CHECK(seen.size() == 8);
}

TEST_CASE("gaussian cluster generation is finite and valid") {
    GenSpec spec;
    spec.dist = Distribution::GaussianClusters;
    spec.clusters = 2;
    spec.ns = 100;
    spec.nt = 100;
    spec.seed = 7;
    auto inst = generate(spec);
    CHECK_NOTHROW(validate_instance(inst));
    CHECK(inst.ns() == 100);
    CHECK(inst.nt() == 100);
}

TEST_CASE("instance round-trips through json and text") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 20; ++iter) {
        auto inst = testutil::random_instance(rng, 8);
        auto j = instance_to_json(inst);
        auto back = instance_from_json(j);
        REQUIRE(back.ns() == inst.ns());
        REQUIRE(back.nt() == inst.nt());
        for (int i = 0; i < inst.ns(); ++i) CHECK(back.s[i].x == inst.s[i].x);

        auto text = instance_to_text(inst);
        auto back2 = parse_instance(text);
        REQUIRE(back2.nt() == inst.nt());
        for (int j2 = 0; j2 < inst.nt(); ++j2) CHECK(back2.t[j2].y == inst.t[j2].y);
    }
}

TEST_CASE("solution json carries pairs, cost and algo") {
    Solution sol;
    sol.pairs.insert(0, 1);
    sol.pairs.insert(2, 0);
    sol.cost = 3.5;
    sol.algo = "exact";
    auto j = solution_to_json(sol);
    auto back = solution_from_json(j);
    CHECK(back.pairs == sol.pairs);
    CHECK(back.cost == sol.cost);
    CHECK(back.algo == "exact");
}
