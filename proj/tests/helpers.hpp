#ifndef TSPLAB_TEST_HELPERS_HPP
#define TSPLAB_TEST_HELPERS_HPP

#include <algorithm>
#include <vector>

#include "tsplab/geometry.hpp"
#include "tsplab/instance.hpp"
#include "tsplab/tour.hpp"

namespace testutil {

using namespace tsplab;

inline Point pt(double x, double y) { return Point{x, y}; }

inline std::vector<Point> random_points(int n, const Box& box, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, box.t);
    std::vector<Point> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        Point p(box.d);
        for (int k = 0; k < box.d; ++k) p[k] = u(rng);
        pts.push_back(std::move(p));
    }
    return pts;
}

inline Instance points_instance(std::vector<Point> pts, const Box& box) {
    Instance inst;
    inst.box = box;
    inst.points = std::move(pts);
    return inst;
}

/// Paths are equal as undirected sequences.
inline bool same_path(const PathSeq& a, const PathSeq& b) {
    if (a == b) return true;
    PathSeq r(b.rbegin(), b.rend());
    return a == r;
}

inline bool valid_tour(const Tour& t, const std::vector<Point>& pts, const Box& box,
                       double tol = 1e-9) {
    if (!is_permutation_of_n(t.order, static_cast<int>(pts.size()))) return false;
    return std::abs(tour_length(t.order, pts, box) - t.length) <= tol;
}

}  // namespace testutil

#endif
