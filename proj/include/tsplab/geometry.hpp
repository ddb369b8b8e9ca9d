#ifndef TSPLAB_GEOMETRY_HPP
#define TSPLAB_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tsplab/rng.hpp"

namespace tsplab {

enum class Topology { torus, cube };

/// The ambient space [0,t]^d, either with periodic boundary (torus) or not.
struct Box {
    int d = 2;
    double t = 1.0;
    Topology topology = Topology::torus;

    Box() = default;
    Box(int d_, double t_, Topology topo = Topology::torus)
        : d(d_), t(t_), topology(topo) {
        if (d < 1) throw std::invalid_argument("Box: dimension must be >= 1");
        if (!(t > 0)) throw std::invalid_argument("Box: side must be > 0");
    }
};

using Point = std::vector<double>;

inline void check_dim(const Point& p, const Box& box) {
    if (static_cast<int>(p.size()) != box.d)
        throw std::invalid_argument("point/box dimension mismatch");
}

/// Reduce a coordinate into [0,t).
inline double wrap_coord(double x, double t) {
    double y = std::fmod(x, t);
    if (y < 0) y += t;
    if (y >= t) y = 0.0;  // fmod can land exactly on t after the += above
    return y;
}

inline Point wrap_point(Point p, const Box& box) {
    if (box.topology == Topology::torus) {
        for (double& x : p) x = wrap_coord(x, box.t);
    }
    return p;
}

/// Coordinate-wise displacement b-a; under the torus the representative with
/// the smallest magnitude (shift by -t/0/+t) is chosen per coordinate, which
/// minimizes the Euclidean norm over all shift combinations.
inline Point displacement(const Point& a, const Point& b, const Box& box) {
    check_dim(a, box);
    check_dim(b, box);
    Point u(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double delta = b[i] - a[i];
        if (box.topology == Topology::torus) {
            if (delta > 0.5 * box.t)
                delta -= box.t;
            else if (delta < -0.5 * box.t)
                delta += box.t;
        }
        u[i] = delta;
    }
    return u;
}

inline double dist2(const Point& a, const Point& b, const Box& box) {
    double s = 0;
    if (a.size() != b.size() || static_cast<int>(a.size()) != box.d)
        throw std::invalid_argument("dist: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
        double delta = b[i] - a[i];
        if (box.topology == Topology::torus) {
            if (delta > 0.5 * box.t)
                delta -= box.t;
            else if (delta < -0.5 * box.t)
                delta += box.t;
        }
        s += delta * delta;
    }
    return s;
}

inline double dist(const Point& a, const Point& b, const Box& box) {
    return std::sqrt(dist2(a, b, box));
}

inline double norm(const Point& u) {
    double s = 0;
    for (double x : u) s += x * x;
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// eps-matchings: A ~ B iff some bijection moves every point by less than eps.
// ---------------------------------------------------------------------------

struct Matching {
    std::vector<int> to_b;  // to_b[i] = index in B matched to A[i]
    double max_displacement = 0.0;
};

namespace detail {

inline bool kuhn_augment(int a, const std::vector<std::vector<int>>& adj,
                         std::vector<int>& match_b, std::vector<char>& used) {
    for (int b : adj[a]) {
        if (used[b]) continue;
        used[b] = 1;
        if (match_b[b] < 0 || kuhn_augment(match_b[b], adj, match_b, used)) {
            match_b[b] = a;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Decide A ~eps~ B by maximum bipartite matching on the "dist < eps" graph.
/// Size mismatch or an incomplete matching yields nullopt.
inline std::optional<Matching> approx_match(const std::vector<Point>& A,
                                            const std::vector<Point>& B,
                                            double eps, const Box& box) {
    if (!(eps > 0)) throw std::invalid_argument("approx_match: eps must be > 0");
    if (A.size() != B.size()) return std::nullopt;
    const int n = static_cast<int>(A.size());
    if (n == 0) return Matching{};

    std::vector<std::vector<int>> adj(n);
    const double e2 = eps * eps;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (dist2(A[i], B[j], box) < e2) adj[i].push_back(j);

    std::vector<int> match_b(n, -1);
    for (int i = 0; i < n; ++i) {
        std::vector<char> used(n, 0);
        if (!detail::kuhn_augment(i, adj, match_b, used)) return std::nullopt;
    }

    Matching m;
    m.to_b.assign(n, -1);
    for (int b = 0; b < n; ++b) m.to_b[match_b[b]] = b;
    for (int i = 0; i < n; ++i)
        m.max_displacement = std::max(m.max_displacement, dist(A[i], B[m.to_b[i]], box));
    return m;
}

// ---------------------------------------------------------------------------
// Perturbation and rounding
// ---------------------------------------------------------------------------

/// Uniform draw from the closed ball of radius delta (rejection sampling).
inline Point sample_ball(int d, double delta, Rng& rng) {
    std::uniform_real_distribution<double> u(-delta, delta);
    Point v(d);
    while (true) {
        double s = 0;
        for (int i = 0; i < d; ++i) {
            v[i] = u(rng);
            s += v[i] * v[i];
        }
        if (s <= delta * delta) return v;
    }
}

/// Independently move each point to a uniform position in the radius-delta
/// ball about it. delta = 0 returns the input bit-exactly.
inline std::vector<Point> perturb(const std::vector<Point>& pts, double delta,
                                  Rng& rng, const Box& box) {
    if (delta < 0) throw std::invalid_argument("perturb: delta must be >= 0");
    if (delta == 0) return pts;
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const Point& p : pts) {
        check_dim(p, box);
        Point v = sample_ball(box.d, delta, rng);
        Point q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + v[i];
        if (box.topology == Topology::torus) {
            q = wrap_point(std::move(q), box);
        } else {
            for (double& x : q) x = std::clamp(x, 0.0, std::nextafter(box.t, 0.0));
        }
        out.push_back(std::move(q));
    }
    return out;
}

/// Number of binary digits used by an eps-rounding grid: smallest m with
/// t / 2^m <= eps.
inline int rounding_bits(double t, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("rounding_bits: eps must be > 0");
    int m = static_cast<int>(std::ceil(std::log2(t / eps)));
    if (m < 0) m = 0;
    while (std::ldexp(eps, m) < t) ++m;
    while (m > 0 && std::ldexp(eps, m - 1) >= t) --m;
    return m;
}

/// Snap every coordinate to the grid t*j/2^m, m = ceil(log2(t/eps)).
inline Point round_point(const Point& p, double eps, const Box& box) {
    check_dim(p, box);
    const int m = rounding_bits(box.t, eps);
    const double cells = std::ldexp(1.0, m);
    Point q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        double j = std::nearbyint(p[i] / box.t * cells);
        if (box.topology == Topology::torus) {
            if (j >= cells) j -= cells;
            if (j < 0) j += cells;
        } else {
            j = std::clamp(j, 0.0, cells - 1);
        }
        q[i] = box.t * j / cells;
    }
    return q;
}

/// Angle at vertex p between rays p->x and p->q, in [0, pi]. On the torus the
/// shift-minimizing displacement representatives are used.
inline double angle(const Point& x, const Point& p, const Point& q, const Box& box) {
    Point u = displacement(p, x, box);
    Point v = displacement(p, q, box);
    double nu = norm(u), nv = norm(v);
    if (nu == 0 || nv == 0)
        throw std::invalid_argument("angle: coincident points");
    double dot = 0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    return std::acos(std::clamp(dot / (nu * nv), -1.0, 1.0));
}

// ---------------------------------------------------------------------------
// (R,eps)-protectedness
// ---------------------------------------------------------------------------

struct ProtectResult {
    bool ok = false;
    std::optional<Matching> matching;   // annulus[i] matched to Y[matching.to_b[i]]
    std::vector<int> annulus;           // indices of X in B(p,R) \ B(p,1)
    const char* reason = "";
};

/// X is (R,eps)-protected by Y at p when the annulus B(p,R)\B(p,1) holds
/// exactly an eps-approximate translate of Y, contained in B(p,sqrt(R)).
inline ProtectResult is_protected(const std::vector<Point>& X,
                                  const std::vector<Point>& Y, const Point& p,
                                  double R, double eps, const Box& box) {
    if (!(R > 1)) throw std::invalid_argument("is_protected: R must be > 1");
    ProtectResult res;
    const double sqrtR = std::sqrt(R);
    bool inside_sqrtR = true;
    for (int i = 0; i < static_cast<int>(X.size()); ++i) {
        double r = dist(X[i], p, box);
        if (r >= 1.0 && r < R) {
            res.annulus.push_back(i);
            if (r >= sqrtR) inside_sqrtR = false;
        }
    }
    if (!inside_sqrtR) {
        res.reason = "annulus point outside B(p,sqrt(R))";
        return res;
    }
    std::vector<Point> got;
    got.reserve(res.annulus.size());
    for (int i : res.annulus) got.push_back(X[i]);
    std::vector<Point> want;
    want.reserve(Y.size());
    for (const Point& y : Y) {
        Point w(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) w[i] = y[i] + p[i];
        want.push_back(wrap_point(std::move(w), box));
    }
    auto m = approx_match(got, want, eps, box);
    if (!m) {
        res.reason = "no eps-matching with Y+p";
        return res;
    }
    res.ok = true;
    res.matching = std::move(m);
    return res;
}

}  // namespace tsplab

#endif
