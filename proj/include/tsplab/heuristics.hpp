#ifndef TSPLAB_HEURISTICS_HPP
#define TSPLAB_HEURISTICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsplab/exact.hpp"
#include "tsplab/instance.hpp"
#include "tsplab/tour.hpp"

namespace tsplab {

struct InfeasibleConstraints : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Heuristic { nn, greedy, ni, fi, karp };

inline const char* heuristic_name(Heuristic h) {
    switch (h) {
        case Heuristic::nn: return "nn";
        case Heuristic::greedy: return "greedy";
        case Heuristic::ni: return "ni";
        case Heuristic::fi: return "fi";
        case Heuristic::karp: return "karp";
    }
    return "?";
}

inline Heuristic heuristic_from_name(const std::string& s) {
    if (s == "nn") return Heuristic::nn;
    if (s == "greedy") return Heuristic::greedy;
    if (s == "ni") return Heuristic::ni;
    if (s == "fi") return Heuristic::fi;
    if (s == "karp") return Heuristic::karp;
    throw std::invalid_argument("unknown heuristic: " + s);
}

/// Distance comparisons in NN/greedy are cut off at the instance precision:
/// values snap to the grid t/2^bits before comparison.
inline double snap_to_precision(double v, double t, int bits) {
    if (bits >= 53) return v;
    const double cells = std::ldexp(1.0, bits);
    return std::nearbyint(v / t * cells) * t / cells;
}

// ---------------------------------------------------------------------------
// Nearest Neighbor
// ---------------------------------------------------------------------------

inline Tour nearest_neighbor(const Instance& inst) {
    const int n = inst.size();
    if (n < 1) throw std::invalid_argument("nearest_neighbor: empty instance");
    const Box& box = inst.box;
    std::vector<char> visited(n, 0);
    std::vector<int> order{0};
    visited[0] = 1;
    int cur = 0;
    for (int step = 1; step < n; ++step) {
        int best = -1;
        double best_d = kInf;
        for (int v = 0; v < n; ++v) {
            if (visited[v]) continue;
            double dv = snap_to_precision(dist(inst.points[cur], inst.points[v], box),
                                          box.t, inst.precision_bits);
            if (dv < best_d) {
                best_d = dv;
                best = v;
            }
        }
        visited[best] = 1;
        order.push_back(best);
        cur = best;
    }
    return Tour{order, tour_length(order, inst.points, box)};
}

// ---------------------------------------------------------------------------
// Greedy edge matching
// ---------------------------------------------------------------------------

namespace detail {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct GreedyEdge {
    double len;
    int u, v;
    bool operator<(const GreedyEdge& o) const {
        if (len != o.len) return len < o.len;
        if (u != o.u) return u < o.u;
        return v < o.v;
    }
};

/// Kruskal-style tour construction. Pre-placed forced edges keep each
/// heuristic decision identical on the rest of the instance; forbidden edges
/// are skipped outright.
inline Tour greedy_impl(const Instance& inst, const EdgeConstraints& cons) {
    const int n = inst.size();
    if (n < 3) throw std::invalid_argument("greedy: need n >= 3");
    const Box& box = inst.box;
    Dsu dsu(n);
    std::vector<int> degree(n, 0);
    std::vector<std::vector<int>> chosen(n);
    int picked = 0;
    auto add_edge = [&](int u, int v) {
        dsu.unite(u, v);
        ++degree[u];
        ++degree[v];
        chosen[u].push_back(v);
        chosen[v].push_back(u);
        ++picked;
    };
    for (const Edge& e : cons.forced) {
        if (degree[e.u] >= 2 || degree[e.v] >= 2 || dsu.find(e.u) == dsu.find(e.v))
            throw InfeasibleConstraints("greedy: forced edges invalid");
        add_edge(e.u, e.v);
    }

    std::vector<GreedyEdge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (cons.is_forced(u, v) || cons.is_forbidden(u, v)) continue;
            edges.push_back({snap_to_precision(dist(inst.points[u], inst.points[v], box),
                                               box.t, inst.precision_bits),
                             u, v});
        }
    std::sort(edges.begin(), edges.end());
    for (const GreedyEdge& e : edges) {
        if (picked == n - 1) break;
        if (degree[e.u] >= 2 || degree[e.v] >= 2) continue;
        if (dsu.find(e.u) == dsu.find(e.v)) continue;
        add_edge(e.u, e.v);
    }
    if (picked != n - 1) throw InfeasibleConstraints("greedy: could not complete a path");
    // close the unique Hamiltonian path
    int a = -1, b = -1;
    for (int v = 0; v < n; ++v)
        if (degree[v] == 1) (a < 0 ? a : b) = v;
    if (cons.is_forbidden(a, b)) throw InfeasibleConstraints("greedy: closing edge forbidden");
    chosen[a].push_back(b);
    chosen[b].push_back(a);
    std::vector<int> order;
    order.reserve(n);
    int prev = -1, cur = 0;
    for (int i = 0; i < n; ++i) {
        order.push_back(cur);
        int next = (chosen[cur][0] != prev) ? chosen[cur][0] : chosen[cur][1];
        prev = cur;
        cur = next;
    }
    order = canonical_cycle(order);
    return Tour{order, tour_length(order, inst.points, box)};
}

}  // namespace detail

inline Tour greedy(const Instance& inst) { return detail::greedy_impl(inst, {}); }

// ---------------------------------------------------------------------------
// Insertion heuristics over contracted entities (forced paths move as units,
// forbidden edges priced at +inf). With empty constraints every entity is a
// single vertex and this is the plain heuristic.
// ---------------------------------------------------------------------------

namespace detail {

struct OrientedEntity {
    int id;
    int orient;  // traversal enters port(1-orient) and exits port(orient)
};

inline Tour insertion_impl(const Instance& inst, const EdgeConstraints& cons, bool farthest) {
    const int n = inst.size();
    if (n < 3) throw std::invalid_argument("insertion: need n >= 3");
    const Box& box = inst.box;
    Decomposition dec = decompose_forced(n, cons);
    if (!dec.feasible) throw InfeasibleConstraints(dec.reason);
    if (dec.complete_cycle) {
        for (const Edge& e : tour_edges(dec.cycle_order))
            if (cons.forbidden.count(e))
                throw InfeasibleConstraints("forced cycle uses forbidden edge");
        return Tour{dec.cycle_order, tour_length(dec.cycle_order, inst.points, box)};
    }
    const int m = static_cast<int>(dec.entities.size());
    auto d = [&](int u, int v) { return dist(inst.points[u], inst.points[v], box); };
    auto priced = [&](int u, int v) { return cons.is_forbidden(u, v) ? kInf : d(u, v); };
    auto ent_dist = [&](int a, int b) {  // plain distance between entity vertex sets
        double best = kInf;
        for (int u : dec.entities[a].seq)
            for (int v : dec.entities[b].seq) best = std::min(best, d(u, v));
        return best;
    };

    int e_start = -1;
    for (int j = 0; j < m && e_start < 0; ++j)
        for (int v : dec.entities[j].seq)
            if (v == 0) e_start = j;

    if (m == 1) {
        auto ord = canonical_cycle(dec.entities[0].seq);
        return Tour{ord, tour_length(ord, inst.points, box)};
    }

    std::vector<char> in_tour(m, 0);
    std::vector<OrientedEntity> tour;

    if (m == 2) {
        const int other = e_start == 0 ? 1 : 0;
        const Entity &a = dec.entities[e_start], &b = dec.entities[other];
        double best = kInf;
        int ba = 1, bb = 1;
        for (int o0 = 0; o0 < 2; ++o0)
            for (int o1 = 0; o1 < 2; ++o1) {
                double L = priced(a.port(o0), b.port(1 - o1)) + priced(b.port(o1), a.port(1 - o0));
                if (L < best) {
                    best = L;
                    ba = o0;
                    bb = o1;
                }
            }
        if (best == kInf) throw InfeasibleConstraints("insertion: no feasible pairing");
        tour = {{e_start, ba}, {other, bb}};
        in_tour[0] = in_tour[1] = 1;
    } else {
        // initial triangle: nearest entity to the start, then the cheapest third
        int ei = -1;
        double ei_d = kInf;
        for (int j = 0; j < m; ++j) {
            if (j == e_start) continue;
            double dj = ent_dist(e_start, j);
            if (dj < ei_d) {
                ei_d = dj;
                ei = j;
            }
        }
        int ej = -1;
        double ej_d = kInf;
        for (int j = 0; j < m; ++j) {
            if (j == e_start || j == ei) continue;
            double dj = ent_dist(e_start, j) + ent_dist(ei, j);
            if (dj < ej_d) {
                ej_d = dj;
                ej = j;
            }
        }
        // pick cycle orientations minimizing the closed length
        double best = kInf;
        std::array<int, 3> ids{e_start, ei, ej};
        std::array<int, 3> best_or{1, 1, 1};
        for (int o0 = 0; o0 < 2; ++o0)
            for (int o1 = 0; o1 < 2; ++o1)
                for (int o2 = 0; o2 < 2; ++o2) {
                    const Entity &a = dec.entities[ids[0]], &b = dec.entities[ids[1]],
                                 &c = dec.entities[ids[2]];
                    double L = priced(a.port(o0), b.port(1 - o1)) +
                               priced(b.port(o1), c.port(1 - o2)) +
                               priced(c.port(o2), a.port(1 - o0));
                    if (L < best) {
                        best = L;
                        best_or = {o0, o1, o2};
                    }
                }
        if (best == kInf) throw InfeasibleConstraints("insertion: no feasible triangle");
        tour = {{ids[0], best_or[0]}, {ids[1], best_or[1]}, {ids[2], best_or[2]}};
        in_tour[ids[0]] = in_tour[ids[1]] = in_tour[ids[2]] = 1;
    }

    // distance from every outside entity to the current tour vertex set
    std::vector<double> to_tour(m, kInf);
    auto absorb = [&](int j) {
        for (int k = 0; k < m; ++k)
            if (!in_tour[k]) to_tour[k] = std::min(to_tour[k], ent_dist(k, j));
    };
    for (const auto& oe : tour) absorb(oe.id);

    while (static_cast<int>(tour.size()) < m) {
        int z = -1;
        double zd = farthest ? -kInf : kInf;
        for (int k = 0; k < m; ++k) {
            if (in_tour[k]) continue;
            if (farthest ? to_tour[k] > zd : to_tour[k] < zd) {
                zd = to_tour[k];
                z = k;
            }
        }
        const Entity& ze = dec.entities[z];
        double best_cost = kInf;
        std::size_t best_pos = 0;
        int best_orient = 0;
        Edge best_edge(0, 1);
        bool have = false;
        for (std::size_t i = 0; i < tour.size(); ++i) {
            const auto& A = tour[i];
            const auto& B = tour[(i + 1) % tour.size()];
            const int xa = dec.entities[A.id].port(A.orient);
            const int yb = dec.entities[B.id].port(1 - B.orient);
            const double dxy = priced(xa, yb);
            const Edge slot(xa, yb);
            for (int o = 0; o < 2; ++o) {
                double c = priced(xa, ze.port(1 - o)) + priced(ze.port(o), yb) - dxy;
                if (c < best_cost || (have && c == best_cost && slot < best_edge)) {
                    best_cost = c;
                    best_pos = i;
                    best_orient = o;
                    best_edge = slot;
                    have = true;
                }
                if (ze.single()) break;
            }
        }
        if (best_cost == kInf) throw InfeasibleConstraints("insertion: no feasible slot");
        tour.insert(tour.begin() + best_pos + 1, OrientedEntity{z, best_orient});
        in_tour[z] = 1;
        absorb(z);
    }

    std::vector<int> order;
    order.reserve(n);
    for (const auto& oe : tour) {
        std::vector<int> seq = dec.entities[oe.id].seq;
        if (oe.orient == 0) std::reverse(seq.begin(), seq.end());
        order.insert(order.end(), seq.begin(), seq.end());
    }
    double L = tour_length(order, inst.points, box);
    if (!std::isfinite(L)) throw InfeasibleConstraints("insertion: infeasible result");
    order = canonical_cycle(order);
    return Tour{order, L};
}

}  // namespace detail

inline Tour nearest_insertion(const Instance& inst) {
    return detail::insertion_impl(inst, {}, false);
}

inline Tour farthest_insertion(const Instance& inst) {
    return detail::insertion_impl(inst, {}, true);
}

// ---------------------------------------------------------------------------
// Karp dissection
// ---------------------------------------------------------------------------

struct KarpDiagnostics {
    int cells_per_axis = 1;
    std::vector<double> cell_tour_lengths;  // exact sub-tour length per nonempty cell
    double stitched_sum = 0.0;              // sum of (sub-tour minus deleted edge)
};

namespace detail {

/// Cells in boustrophedon (snake) order, generalized over dimensions: axis 0
/// sweeps fastest and flips direction with the parity of the outer counters.
inline std::vector<std::vector<int>> snake_order(int g, int d) {
    std::vector<std::vector<int>> cells;
    std::vector<int> idx(d, 0);
    long total = 1;
    for (int i = 0; i < d; ++i) total *= g;
    for (long c = 0; c < total; ++c) {
        std::vector<int> real = idx;
        int parity = 0;
        for (int i = d - 1; i >= 0; --i) {
            if (parity % 2) real[i] = g - 1 - idx[i];
            parity += real[i];
        }
        cells.push_back(real);
        for (int i = 0; i < d; ++i) {
            if (++idx[i] < g) break;
            idx[i] = 0;
        }
    }
    return cells;
}

struct RunningTour {
    std::vector<int> order;
    EdgeSet protect;
};

/// Merge a fresh cell cycle into the running tour: delete one unprotected
/// running edge and one cell edge, reconnect with the cheapest of the two
/// pairings. Cell edges become protected once their cell has lost an edge, so
/// the final tour restricted to a cell is its exact sub-tour minus one edge.
/// deleted_sum accumulates the lengths of original (cell-tour) edges removed.
inline void merge_cycle(RunningTour& run, const std::vector<int>& cell,
                        const std::vector<Point>& pts, const Box& box, bool first_merge,
                        double* deleted_sum) {
    auto d = [&](int u, int v) { return dist(pts[u], pts[v], box); };
    const int rn = static_cast<int>(run.order.size());
    const int cn = static_cast<int>(cell.size());

    if (rn <= 2 && cn <= 2) {
        // tiny cases: keep every pair edge (a 2-cycle loses its doubled copy)
        if (rn == 2) {
            run.protect.insert(Edge(run.order[0], run.order[1]));
            if (first_merge) *deleted_sum += d(run.order[0], run.order[1]);
        }
        if (cn == 2) {
            run.protect.insert(Edge(cell[0], cell[1]));
            *deleted_sum += d(cell[0], cell[1]);
        }
        std::vector<int> merged = run.order;
        if (cn == 2 && rn == 2) {
            double o1 = d(run.order[1], cell[0]) + d(cell[1], run.order[0]);
            double o2 = d(run.order[1], cell[1]) + d(cell[0], run.order[0]);
            if (o2 < o1)
                merged.insert(merged.end(), {cell[1], cell[0]});
            else
                merged.insert(merged.end(), {cell[0], cell[1]});
        } else {
            merged.insert(merged.end(), cell.begin(), cell.end());
        }
        run.order = merged;
        return;
    }

    const bool run_big = rn >= 3;
    const bool cell_big = cn >= 3;
    double best = kInf;
    int best_ri = -1, best_ci = -1, best_flip = 0;

    auto run_edge_ok = [&](int i) {
        return !run.protect.count(Edge(run.order[i], run.order[(i + 1) % rn]));
    };
    auto protect_cell_except = [&](int skip) {
        if (cn >= 3) {
            for (int k = 0; k < cn; ++k)
                if (k != skip) run.protect.insert(Edge(cell[k], cell[(k + 1) % cn]));
        } else if (cn == 2) {
            run.protect.insert(Edge(cell[0], cell[1]));
        }
    };
    auto protect_run_except = [&](int skip) {
        for (int k = 0; k < rn; ++k)
            if (k != skip) run.protect.insert(Edge(run.order[k], run.order[(k + 1) % rn]));
    };

    if (run_big && cell_big) {
        for (int i = 0; i < rn; ++i) {
            if (!run_edge_ok(i)) continue;
            int u = run.order[i], v = run.order[(i + 1) % rn];
            double duv = d(u, v);
            for (int j = 0; j < cn; ++j) {
                int a = cell[j], b = cell[(j + 1) % cn];
                double dab = d(a, b);
                double c1 = d(u, a) + d(b, v) - duv - dab;
                double c2 = d(u, b) + d(a, v) - duv - dab;
                if (c1 < best) best = c1, best_ri = i, best_ci = j, best_flip = 0;
                if (c2 < best) best = c2, best_ri = i, best_ci = j, best_flip = 1;
            }
        }
        std::vector<int> seg;  // cell opened at edge (best_ci, best_ci+1)
        for (int k = 0; k < cn; ++k) seg.push_back(cell[(best_ci + 1 + k) % cn]);
        if (best_flip == 0) std::reverse(seg.begin(), seg.end());
        std::vector<int> merged;
        for (int k = 0; k <= best_ri; ++k) merged.push_back(run.order[k]);
        merged.insert(merged.end(), seg.begin(), seg.end());
        for (int k = best_ri + 1; k < rn; ++k) merged.push_back(run.order[k]);
        *deleted_sum += d(cell[best_ci], cell[(best_ci + 1) % cn]);
        if (first_merge) *deleted_sum += d(run.order[best_ri], run.order[(best_ri + 1) % rn]);
        protect_cell_except(best_ci);
        if (first_merge) protect_run_except(best_ri);
        run.order = std::move(merged);
        return;
    }

    if (run_big) {  // cell has 1-2 vertices; its (possible) edge stays intact
        for (int i = 0; i < rn; ++i) {
            if (!run_edge_ok(i)) continue;
            int u = run.order[i], v = run.order[(i + 1) % rn];
            double duv = d(u, v);
            if (cn == 1) {
                double c = d(u, cell[0]) + d(cell[0], v) - duv;
                if (c < best) best = c, best_ri = i, best_flip = 0;
            } else {
                double c1 = d(u, cell[0]) + d(cell[1], v) - duv;
                double c2 = d(u, cell[1]) + d(cell[0], v) - duv;
                if (c1 < best) best = c1, best_ri = i, best_flip = 0;
                if (c2 < best) best = c2, best_ri = i, best_flip = 1;
            }
        }
        std::vector<int> seg = cell;
        if (best_flip == 1) std::reverse(seg.begin(), seg.end());
        std::vector<int> merged;
        for (int k = 0; k <= best_ri; ++k) merged.push_back(run.order[k]);
        merged.insert(merged.end(), seg.begin(), seg.end());
        for (int k = best_ri + 1; k < rn; ++k) merged.push_back(run.order[k]);
        if (cn == 2) *deleted_sum += d(cell[0], cell[1]);
        if (first_merge) *deleted_sum += d(run.order[best_ri], run.order[(best_ri + 1) % rn]);
        protect_cell_except(-1);
        if (first_merge) protect_run_except(best_ri);
        run.order = std::move(merged);
        return;
    }

    // running tour has 1-2 vertices, the cell is big: splice it into a cell edge
    for (int j = 0; j < cn; ++j) {
        int a = cell[j], b = cell[(j + 1) % cn];
        double dab = d(a, b);
        if (rn == 1) {
            double c = d(a, run.order[0]) + d(run.order[0], b) - dab;
            if (c < best) best = c, best_ci = j, best_flip = 0;
        } else {
            double c1 = d(a, run.order[0]) + d(run.order[1], b) - dab;
            double c2 = d(a, run.order[1]) + d(run.order[0], b) - dab;
            if (c1 < best) best = c1, best_ci = j, best_flip = 0;
            if (c2 < best) best = c2, best_ci = j, best_flip = 1;
        }
    }
    std::vector<int> seg = run.order;
    if (best_flip == 1) std::reverse(seg.begin(), seg.end());
    std::vector<int> merged;
    for (int k = 0; k <= best_ci; ++k) merged.push_back(cell[k]);
    merged.insert(merged.end(), seg.begin(), seg.end());
    for (int k = best_ci + 1; k < cn; ++k) merged.push_back(cell[k]);
    if (rn == 2 && first_merge) *deleted_sum += d(run.order[0], run.order[1]);
    if (rn == 2) run.protect.insert(Edge(run.order[0], run.order[1]));
    *deleted_sum += d(cell[best_ci], cell[(best_ci + 1) % cn]);
    protect_cell_except(best_ci);
    run.order = std::move(merged);
}

/// Exact cycle over a point subset; if it exceeds the DP guard, quarter the
/// region recursively and stitch the parts.
inline std::vector<int> solve_region(const std::vector<int>& members,
                                     const std::vector<Point>& pts, const Box& box,
                                     const std::vector<double>& lo, double side, int n_max) {
    if (static_cast<int>(members.size()) <= n_max) {
        std::vector<Point> sub;
        sub.reserve(members.size());
        for (int idx : members) sub.push_back(pts[idx]);
        Tour t = held_karp_tour(sub, box, n_max);
        std::vector<int> order;
        for (int v : t.order) order.push_back(members[v]);
        return order;
    }
    const int d = box.d;
    const double half = side / 2;
    std::vector<std::vector<int>> buckets(std::size_t{1} << d);
    for (int idx : members) {
        std::size_t code = 0;
        for (int i = 0; i < d; ++i) {
            int bit = pts[idx][i] >= lo[i] + half ? 1 : 0;
            code |= static_cast<std::size_t>(bit) << i;
        }
        buckets[code].push_back(idx);
    }
    RunningTour run;
    bool started = false;
    int merges = 0;
    double scratch = 0;
    for (std::size_t code = 0; code < buckets.size(); ++code) {
        if (buckets[code].empty()) continue;
        std::vector<double> sublo = lo;
        for (int i = 0; i < d; ++i)
            if (code >> i & 1) sublo[i] += half;
        std::vector<int> part = solve_region(buckets[code], pts, box, sublo, half, n_max);
        if (!started) {
            run.order = part;
            started = true;
        } else {
            ++merges;
            merge_cycle(run, part, pts, box, merges == 1, &scratch);
        }
    }
    return run.order;
}

}  // namespace detail

/// Karp's dissection baseline: split [0,t]^d into s(n) = g^d cells with
/// g = floor((n/ln n)^(1/d)), solve each cell exactly, and patch the cell
/// tours together in snake order.
inline Tour karp_dissection(const Instance& inst, KarpDiagnostics* diag = nullptr,
                            int n_max = kExactDefaultMax) {
    const int n = inst.size();
    if (n < 2) throw std::invalid_argument("karp_dissection: need n >= 2");
    const Box& box = inst.box;
    int g = static_cast<int>(std::floor(std::pow(n / std::log(n), 1.0 / box.d)));
    if (g < 1) g = 1;
    const double side = box.t / g;

    long total_cells = 1;
    for (int i = 0; i < box.d; ++i) total_cells *= g;
    std::vector<std::vector<int>> cell_members(total_cells);
    auto cell_key = [&](const std::vector<int>& idx) {
        long c = 0;
        for (int i = 0; i < box.d; ++i) c = c * g + idx[i];
        return c;
    };
    for (int i = 0; i < n; ++i) {
        std::vector<int> idx(box.d);
        for (int k = 0; k < box.d; ++k)
            idx[k] = std::clamp(static_cast<int>(inst.points[i][k] / side), 0, g - 1);
        cell_members[cell_key(idx)].push_back(i);
    }

    KarpDiagnostics local;
    KarpDiagnostics& dg = diag ? *diag : local;
    dg.cells_per_axis = g;

    detail::RunningTour run;
    bool started = false;
    int merges = 0;
    double total_cell_len = 0;
    double deleted_sum = 0;
    for (const std::vector<int>& cell_idx : detail::snake_order(g, box.d)) {
        const std::vector<int>& members = cell_members[cell_key(cell_idx)];
        if (members.empty()) continue;
        std::vector<double> lo(box.d);
        for (int i = 0; i < box.d; ++i) lo[i] = cell_idx[i] * side;
        std::vector<int> cell_tour =
            detail::solve_region(members, inst.points, box, lo, side, n_max);
        double sub_len = tour_length(cell_tour, inst.points, box);
        dg.cell_tour_lengths.push_back(sub_len);
        total_cell_len += sub_len;
        if (!started) {
            run.order = cell_tour;
            started = true;
        } else {
            ++merges;
            detail::merge_cycle(run, cell_tour, inst.points, box, merges == 1, &deleted_sum);
        }
    }
    dg.stitched_sum = total_cell_len - deleted_sum;
    auto order = canonical_cycle(run.order);
    return Tour{order, tour_length(order, inst.points, box)};
}

// ---------------------------------------------------------------------------

inline Tour run_heuristic(Heuristic h, const Instance& inst) {
    switch (h) {
        case Heuristic::nn: return nearest_neighbor(inst);
        case Heuristic::greedy: return greedy(inst);
        case Heuristic::ni: return nearest_insertion(inst);
        case Heuristic::fi: return farthest_insertion(inst);
        case Heuristic::karp: return karp_dissection(inst);
    }
    throw std::logic_error("run_heuristic: bad enum");
}

namespace detail {

inline Tour constrained_nn(const Instance& inst, const EdgeConstraints& cons) {
    const int n = inst.size();
    const Box& box = inst.box;
    Decomposition dec = decompose_forced(n, cons);
    if (!dec.feasible) throw InfeasibleConstraints(dec.reason);
    if (dec.complete_cycle) {
        for (const Edge& e : tour_edges(dec.cycle_order))
            if (cons.forbidden.count(e))
                throw InfeasibleConstraints("forced cycle uses forbidden edge");
        return Tour{dec.cycle_order, tour_length(dec.cycle_order, inst.points, box)};
    }
    const int m = static_cast<int>(dec.entities.size());
    auto priced = [&](int u, int v) {
        if (cons.is_forbidden(u, v)) return kInf;
        return snap_to_precision(dist(inst.points[u], inst.points[v], box), box.t,
                                 inst.precision_bits);
    };
    int e0 = -1;
    for (int j = 0; j < m && e0 < 0; ++j)
        for (int v : dec.entities[j].seq)
            if (v == 0) e0 = j;

    std::vector<char> visited(m, 0);
    visited[e0] = 1;
    // start at vertex 0 and walk the forced path it sits on
    std::vector<int> order;
    {
        std::vector<int> seq = dec.entities[e0].seq;
        if (!seq.empty() && seq.back() == 0) std::reverse(seq.begin(), seq.end());
        order = seq;
    }
    int pos = order.back();
    int entry0 = order.front();
    for (int step = 1; step < m; ++step) {
        int best_ent = -1, best_port = 0;
        double best_d = kInf;
        int best_vertex = n;
        for (int j = 0; j < m; ++j) {
            if (visited[j]) continue;
            for (int s = 0; s < 2; ++s) {
                int v = dec.entities[j].port(s);
                double dv = priced(pos, v);
                if (dv < best_d || (dv == best_d && v < best_vertex)) {
                    best_d = dv;
                    best_vertex = v;
                    best_ent = j;
                    best_port = s;
                }
                if (dec.entities[j].single()) break;
            }
        }
        if (best_d == kInf) throw InfeasibleConstraints("nn: stuck on forbidden edges");
        visited[best_ent] = 1;
        std::vector<int> seq = dec.entities[best_ent].seq;
        if (best_port == 1) std::reverse(seq.begin(), seq.end());
        order.insert(order.end(), seq.begin(), seq.end());
        pos = order.back();
    }
    if (cons.is_forbidden(pos, entry0) && pos != entry0)
        throw InfeasibleConstraints("nn: closing edge forbidden");
    double L = tour_length(order, inst.points, box);
    return Tour{canonical_cycle(order), L};
}

}  // namespace detail

/// Run a heuristic under branching constraints: every forced edge appears in
/// the result, no forbidden edge does, and the heuristic's own selection logic
/// is kept intact on the contracted instance.
inline Tour run_constrained(Heuristic h, const Instance& inst, const EdgeConstraints& cons) {
    if (cons.empty() && h != Heuristic::karp) return run_heuristic(h, inst);
    Tour t;
    switch (h) {
        case Heuristic::nn: t = detail::constrained_nn(inst, cons); break;
        case Heuristic::greedy: t = detail::greedy_impl(inst, cons); break;
        case Heuristic::ni: t = detail::insertion_impl(inst, cons, false); break;
        case Heuristic::fi: t = detail::insertion_impl(inst, cons, true); break;
        case Heuristic::karp:
            throw std::invalid_argument("karp_dissection has no constrained variant");
    }
    EdgeSet used;
    for (const Edge& e : tour_edges(t.order)) used.insert(e);
    for (const Edge& e : cons.forced)
        if (!used.count(e)) throw std::logic_error("run_constrained: forced edge missing");
    for (const Edge& e : cons.forbidden)
        if (used.count(e)) throw std::logic_error("run_constrained: forbidden edge used");
    return t;
}

}  // namespace tsplab

#endif
