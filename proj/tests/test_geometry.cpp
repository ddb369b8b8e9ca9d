#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsplab/geometry.hpp"
#include "tsplab/stats.hpp"
#include "helpers.hpp"

using namespace tsplab;
using testutil::pt;

namespace {

// Independent oracle: torus distance by explicit minimum over all 3^d shifts.
double torus_dist_oracle(const Point& a, const Point& b, const Box& box) {
    int d = box.d;
    std::vector<int> shift(d, -1);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        double s = 0;
        for (int i = 0; i < d; ++i) {
            double delta = b[i] + shift[i] * box.t - a[i];
            s += delta * delta;
        }
        best = std::min(best, s);
        int i = 0;
        for (; i < d; ++i) {
            if (++shift[i] <= 1) break;
            shift[i] = -1;
        }
        if (i == d) break;
    }
    return std::sqrt(best);
}

// Independent oracle: eps-matching by exhaustive bijection search.
bool match_exists_oracle(const std::vector<Point>& A, const std::vector<Point>& B,
                         double eps, const Box& box) {
    if (A.size() != B.size()) return false;
    std::vector<int> perm(A.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < A.size() && ok; ++i)
            ok = dist(A[i], B[perm[i]], box) < eps;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

TEST_CASE("dist basic cases", "[geometry]") {
    Box cube(2, 10.0, Topology::cube);
    CHECK(dist(pt(0, 0), pt(3, 4), cube) == Catch::Approx(5.0));

    Box torus(2, 10.0, Topology::torus);
    CHECK(dist(pt(0.5, 0), pt(9.5, 0), torus) == Catch::Approx(1.0));

    CHECK_THROWS_AS(dist(Point{1.0}, pt(0, 0), torus), std::invalid_argument);
}

TEST_CASE("torus dist equals brute-force over shifts", "[geometry]") {
    Box box(2, 7.0, Topology::torus);
    Rng rng = make_rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        auto p = testutil::random_points(2, box, rng);
        CHECK(dist(p[0], p[1], box) == Catch::Approx(torus_dist_oracle(p[0], p[1], box)).margin(1e-12));
    }
    Box box3(3, 4.0, Topology::torus);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = testutil::random_points(2, box3, rng);
        CHECK(dist(p[0], p[1], box3) == Catch::Approx(torus_dist_oracle(p[0], p[1], box3)).margin(1e-12));
    }
}

TEST_CASE("dist is a metric", "[geometry]") {
    Box box(2, 5.0, Topology::torus);
    Rng rng = make_rng(5);
    for (int trial = 0; trial < 100000; ++trial) {
        auto p = testutil::random_points(3, box, rng);
        double ab = dist(p[0], p[1], box);
        double ba = dist(p[1], p[0], box);
        double ac = dist(p[0], p[2], box);
        double cb = dist(p[2], p[1], box);
        REQUIRE(ab == ba);  // exact symmetry
        REQUIRE(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("approx_match basics", "[geometry]") {
    Box box(2, 10.0, Topology::torus);
    std::vector<Point> A{pt(1, 1), pt(2, 3), pt(5, 5)};

    SECTION("identity matching") {
        auto m = approx_match(A, A, 0.5, box);
        REQUIRE(m.has_value());
        CHECK(m->max_displacement == 0.0);
    }
    SECTION("displacement at eps is rejected") {
        double eps = 0.25;
        std::vector<Point> B{pt(1, 1 + 2 * eps)};
        CHECK_FALSE(approx_match({pt(1, 1)}, B, eps, box).has_value());
    }
    SECTION("size mismatch is absent") {
        CHECK_FALSE(approx_match(A, {pt(1, 1)}, 1.0, box).has_value());
    }
}

TEST_CASE("approx_match agrees with exhaustive bijection search", "[geometry]") {
    Box box(2, 10.0, Topology::torus);
    Rng rng = make_rng(23);
    const double eps = 0.3;
    for (int trial = 0; trial < 60; ++trial) {
        auto A = testutil::random_points(6, box, rng);
        std::vector<Point> B;
        if (trial % 2 == 0) {
            // B = A shifted by eps/2 per point: a matching must exist
            for (auto p : A) {
                Point v = sample_ball(2, eps / 2, rng);
                for (int i = 0; i < 2; ++i) p[i] += v[i];
                B.push_back(wrap_point(p, box));
            }
        } else {
            B = testutil::random_points(6, box, rng);
        }
        bool fast = approx_match(A, B, eps, box).has_value();
        bool slow = match_exists_oracle(A, B, eps, box);
        REQUIRE(fast == slow);
        if (trial % 2 == 0) REQUIRE(fast);
    }
}

TEST_CASE("approx_match existence is symmetric", "[geometry]") {
    Box box(2, 10.0, Topology::torus);
    Rng rng = make_rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        auto A = testutil::random_points(5, box, rng);
        auto B = perturb(A, 0.4, rng, box);
        double eps = 0.35;
        CHECK(approx_match(A, B, eps, box).has_value() ==
              approx_match(B, A, eps, box).has_value());
    }
}

TEST_CASE("perturb", "[geometry]") {
    Box box(2, 10.0, Topology::torus);
    Rng rng = make_rng(77);

    SECTION("delta 0 is the identity") {
        auto pts = testutil::random_points(20, box, rng);
        CHECK(perturb(pts, 0.0, rng, box) == pts);
    }
    SECTION("mean displacement matches the analytic ball mean") {
        // uniform in a d-ball of radius delta has E[r] = delta * d/(d+1)
        const double delta = 1.0;
        const int samples = 100000;
        std::vector<Point> base(samples, pt(5, 5));
        auto moved = perturb(base, delta, rng, box);
        double mean = 0;
        for (int i = 0; i < samples; ++i) mean += dist(base[i], moved[i], box);
        mean /= samples;
        CHECK(mean == Catch::Approx(2.0 / 3.0).epsilon(0.01));
    }
    SECTION("wraparound keeps points in the box") {
        std::vector<Point> base(200, pt(0.01, 0.01));
        auto moved = perturb(base, 3.0, rng, box);
        for (const auto& p : moved)
            for (double x : p) {
                CHECK(x >= 0.0);
                CHECK(x < box.t);
            }
    }
    SECTION("perturbing uniform points stays uniform (chi-square)") {
        Rng g = make_rng(123);
        auto pts = testutil::random_points(100000, box, g);
        auto moved = perturb(pts, 0.7, g, box);
        CHECK(chi2_uniform_pvalue(moved, box, 10) > 0.01);
    }
}

TEST_CASE("round_point", "[geometry]") {
    Box box(2, 1.0, Topology::torus);

    SECTION("grid parameters forced by the formula") {
        CHECK(rounding_bits(1.0, 0.25) == 2);
        Point p = round_point(pt(0.3, 0.6), 0.25, box);
        CHECK(p[0] == 0.25);
        CHECK(p[1] == 0.5);
    }
    SECTION("a grid point is fixed") {
        Point p = pt(0.25, 0.75);
        CHECK(round_point(p, 0.25, box) == p);
    }
    SECTION("rounding moves by at most eps, and is idempotent") {
        Rng rng = make_rng(9);
        Box b2(2, 3.0, Topology::torus);
        for (int trial = 0; trial < 10000; ++trial) {
            auto p = testutil::random_points(1, b2, rng)[0];
            double eps = 0.01 + 0.2 * (trial % 7);
            Point q = round_point(p, eps, b2);
            REQUIRE(dist(p, q, b2) <= eps);
            REQUIRE(round_point(q, eps, b2) == q);
        }
    }
}

TEST_CASE("angle", "[geometry]") {
    Box box(2, 100.0, Topology::torus);
    Point p = pt(50, 50);
    Point q = pt(50, 51);  // p + (0,1)
    CHECK(angle(pt(50, 52), p, q, box) == Catch::Approx(0.0).margin(1e-12));
    CHECK(angle(pt(51, 50), p, q, box) == Catch::Approx(M_PI / 2));
    CHECK(angle(pt(51, 51), p, q, box) == Catch::Approx(M_PI / 4));
    CHECK_THROWS_AS(angle(p, p, q, box), std::invalid_argument);
}

TEST_CASE("is_protected", "[geometry]") {
    Box box(2, 100.0, Topology::torus);
    const double R = 16.0, eps = 0.05;
    std::vector<Point> Y{pt(0, 2), pt(-1.7, -1), pt(1.7, -1)};
    Point p = pt(40, 40);

    auto translated = [&](const Point& loc) {
        return wrap_point(pt(p[0] + loc[0], p[1] + loc[1]), box);
    };
    std::vector<Point> X;
    for (const auto& y : Y) X.push_back(translated(y));
    X.push_back(translated(pt(0.2, -0.1)));  // interior points are unconstrained
    X.push_back(translated(pt(-0.4, 0.3)));
    X.push_back(pt(5, 5));  // far away

    SECTION("exact copy is protected") {
        auto res = is_protected(X, Y, p, R, eps, box);
        REQUIRE(res.ok);
        CHECK(res.annulus.size() == 3);
    }
    SECTION("stray annulus point outside sqrt(R) breaks it") {
        auto bad = X;
        bad.push_back(translated(pt(R - 0.1, 0)));
        auto res = is_protected(bad, Y, p, R, eps, box);
        CHECK_FALSE(res.ok);
    }
    SECTION("eps/2-perturbed copy is still protected; oracle agrees") {
        Rng rng = make_rng(3);
        auto bad = X;
        for (int i = 0; i < 3; ++i) {
            Point v = sample_ball(2, eps / 2, rng);
            bad[i] = wrap_point(pt(bad[i][0] + v[0], bad[i][1] + v[1]), box);
        }
        auto res = is_protected(bad, Y, p, R, eps, box);
        REQUIRE(res.ok);
        std::vector<Point> got;
        for (int idx : res.annulus) got.push_back(bad[idx]);
        std::vector<Point> want;
        for (const auto& y : Y) want.push_back(translated(y));
        CHECK(match_exists_oracle(got, want, eps, box));
    }
    SECTION("translation invariance on the torus") {
        Point shift = pt(33.25, 91.5);
        std::vector<Point> XS;
        for (const auto& x : X)
            XS.push_back(wrap_point(pt(x[0] + shift[0], x[1] + shift[1]), box));
        Point ps = wrap_point(pt(p[0] + shift[0], p[1] + shift[1]), box);
        CHECK(is_protected(XS, Y, ps, R, eps, box).ok ==
              is_protected(X, Y, p, R, eps, box).ok);
    }
}

TEST_CASE("chi-square helper sanity", "[geometry]") {
    // p-value of a fair statistic should be moderate, of a rigged one tiny
    CHECK(chi2_pvalue(99.0, 99) > 0.3);
    CHECK(chi2_pvalue(300.0, 99) < 1e-6);
}
