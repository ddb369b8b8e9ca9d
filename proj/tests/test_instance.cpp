#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "tsplab/instance.hpp"
#include "tsplab/io.hpp"
#include "tsplab/stats.hpp"
#include "helpers.hpp"

using namespace tsplab;
using testutil::pt;

TEST_CASE("gen_uniform", "[instance]") {
    SECTION("n=1 gives a single point with t=1") {
        Instance inst = gen_uniform(1, 2, 7);
        CHECK(inst.size() == 1);
        CHECK(inst.box.t == Catch::Approx(1.0));
    }
    SECTION("t^d = n and points are uniform") {
        Instance inst = gen_uniform(10000, 2, 42);
        CHECK(std::pow(inst.box.t, 2) == Catch::Approx(10000.0).epsilon(1e-9));
        CHECK(chi2_uniform_pvalue(inst.points, inst.box, 10) > 0.01);
        for (const auto& p : inst.points)
            for (double x : p) {
                REQUIRE(x >= 0);
                REQUIRE(x < inst.box.t);
            }
    }
    SECTION("same seed, same instance") {
        Instance a = gen_uniform(100, 2, 9), b = gen_uniform(100, 2, 9);
        CHECK(a.points == b.points);
        Instance c = gen_uniform(100, 2, 10);
        CHECK(a.points != c.points);
    }
}

TEST_CASE("discretize", "[instance]") {
    Instance inst = gen_uniform(200, 2, 3);

    SECTION("very fine grid is the identity") {
        auto res = discretize(inst, 60);
        CHECK(res.instance.points == inst.points);
    }
    SECTION("bits=1 forces coordinates onto {0, t/2}") {
        auto res = discretize(inst, 1);
        for (const auto& p : res.instance.points)
            for (double x : p) CHECK((x == 0.0 || x == inst.box.t / 2));
    }
    SECTION("round-trip displacement bounded by half a grid step") {
        int bits = 8;
        auto res = discretize(inst, bits);
        double cell = inst.box.t * std::ldexp(1.0, -bits);
        double bound = cell / 2 * std::sqrt(2.0) + 1e-12;
        for (int i = 0; i < inst.size(); ++i)
            REQUIRE(dist(inst.points[i], res.instance.points[i], inst.box) <= bound);
    }
    SECTION("grid collisions are reported") {
        Instance tiny = testutil::points_instance({pt(0.1, 0.1), pt(0.12, 0.12)},
                                                  Box(2, 1.0, Topology::torus));
        auto res = discretize(tiny, 2);
        REQUIRE(res.duplicates.size() == 1);
        CHECK(res.instance.size() == 2);  // retained
    }
}

TEST_CASE("plant", "[instance]") {
    std::vector<Point> gadget{pt(0, 1), pt(0.87, -0.5), pt(-0.87, -0.5)};

    SECTION("planting into an empty region gives the translated gadget") {
        Instance inst = testutil::points_instance({}, Box(2, 20.0, Topology::torus));
        auto out = plant(inst, gadget, pt(10, 10), 3.0, "tri");
        REQUIRE(out.instance.size() == 3);
        CHECK(out.record.members == std::vector<int>{0, 1, 2});
        CHECK(dist(out.instance.points[0], pt(10, 11), out.instance.box) < 1e-12);
    }
    SECTION("clearance removes original points; members land last") {
        Instance inst = gen_uniform(500, 2, 11);
        Point center = pt(inst.box.t / 2, inst.box.t / 2);
        auto out = plant(inst, gadget, center, 4.0, "tri");
        int n = out.instance.size();
        REQUIRE(out.record.members == std::vector<int>{n - 3, n - 2, n - 1});
        double min_gap = 1e18;
        for (int i = 0; i + 3 < n; ++i)
            for (int m : out.record.members)
                min_gap = std::min(min_gap,
                                   dist(out.instance.points[i], out.instance.points[m],
                                        out.instance.box));
        REQUIRE(min_gap >= 4.0);
        // survivors keep their relative order
        int prev = -1;
        std::size_t scan = 0;
        for (int i = 0; i + 3 < n; ++i) {
            while (scan < inst.points.size() && inst.points[scan] != out.instance.points[i])
                ++scan;
            REQUIRE(scan < inst.points.size());
            REQUIRE(static_cast<int>(scan) > prev);
            prev = static_cast<int>(scan);
        }
    }
    SECTION("five non-overlapping copies, pairwise member distance >= R") {
        Instance inst = gen_uniform(2000, 2, 5);
        const double R = 3.0;
        Instance cur = inst;
        double t = inst.box.t;
        std::vector<Point> centers{pt(t * 0.2, t * 0.2), pt(t * 0.8, t * 0.2),
                                   pt(t * 0.5, t * 0.5), pt(t * 0.2, t * 0.8),
                                   pt(t * 0.8, t * 0.8)};
        for (const auto& c : centers) cur = plant(cur, gadget, c, R, "tri").instance;
        REQUIRE(cur.plants.size() == 5);
        for (std::size_t a = 0; a < cur.plants.size(); ++a)
            for (std::size_t b = a + 1; b < cur.plants.size(); ++b)
                for (int i : cur.plants[a].members)
                    for (int j : cur.plants[b].members)
                        REQUIRE(dist(cur.points[i], cur.points[j], cur.box) >= R);
    }
    SECTION("gadget overflowing a cube box throws") {
        Instance inst = testutil::points_instance({}, Box(2, 5.0, Topology::cube));
        CHECK_THROWS_AS(plant(inst, gadget, pt(4.9, 4.9), 1.0, "tri"), std::invalid_argument);
    }
    SECTION("survivor floor is enforced") {
        Instance inst = gen_uniform(10, 2, 1);
        CHECK_THROWS_AS(plant(inst, gadget, pt(1, 1), inst.box.t, "tri", {}, 5),
                        std::runtime_error);
    }
}

TEST_CASE("save/load round-trip is bit-exact", "[instance]") {
    Rng rng = make_rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = gen_uniform(1 + static_cast<int>(rng() % 60), 2, rng());
        if (trial % 3 == 0) {
            auto planted = plant(inst, {pt(0, 0.5), pt(0.4, -0.3)},
                                 pt(inst.box.t / 2, inst.box.t / 2), 1.0, "pair",
                                 {{"R", 1.0}, {"eps", 0.125}});
            inst = planted.instance;
        }
        std::stringstream ss;
        save_instance(inst, ss);
        Instance back = load_instance(ss);
        REQUIRE(back.points == inst.points);
        REQUIRE(back.box.t == inst.box.t);
        REQUIRE(back.box.d == inst.box.d);
        REQUIRE(back.precision_bits == inst.precision_bits);
        REQUIRE(back.seed == inst.seed);
        REQUIRE(back.plants.size() == inst.plants.size());
        for (std::size_t i = 0; i < inst.plants.size(); ++i) {
            CHECK(back.plants[i].members == inst.plants[i].members);
            CHECK(back.plants[i].center == inst.plants[i].center);
            CHECK(back.plants[i].params == inst.plants[i].params);
            CHECK(back.plants[i].clearance == inst.plants[i].clearance);
        }
    }
}

TEST_CASE("save/load edge cases", "[instance]") {
    SECTION("empty instance") {
        Instance inst = testutil::points_instance({}, Box(2, 4.0, Topology::cube));
        std::stringstream ss;
        save_instance(inst, ss);
        Instance back = load_instance(ss);
        CHECK(back.size() == 0);
        CHECK(back.box.topology == Topology::cube);
    }
    SECTION("corrupted header reports line 1") {
        std::stringstream ss("TSPLAB v1 {broken\n");
        try {
            load_instance(ss);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 1);
        }
    }
    SECTION("bad coordinate reports its line") {
        Instance inst = gen_uniform(3, 2, 1);
        std::stringstream ss;
        save_instance(inst, ss);
        std::string text = ss.str();
        auto pos = text.rfind("0x");
        text = text.substr(0, pos) + "zzz\n";
        std::stringstream broken(text);
        try {
            load_instance(broken);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 4);
        }
    }
}
