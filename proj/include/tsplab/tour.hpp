#ifndef TSPLAB_TOUR_HPP
#define TSPLAB_TOUR_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "tsplab/geometry.hpp"

namespace tsplab {

/// Undirected edge between vertex indices, stored with u < v.
struct Edge {
    int u = -1, v = -1;
    Edge() = default;
    Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {
        if (a == b) throw std::invalid_argument("Edge: loop");
    }
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeSet = std::set<Edge>;

struct Tour {
    std::vector<int> order;  // visiting order; the cycle closes back to order[0]
    double length = 0.0;
};

using PathSeq = std::vector<int>;

inline double tour_length(const std::vector<int>& order, const std::vector<Point>& pts,
                          const Box& box) {
    double L = 0;
    const int n = static_cast<int>(order.size());
    for (int i = 0; i < n; ++i) L += dist(pts[order[i]], pts[order[(i + 1) % n]], box);
    return L;
}

inline double path_length(const std::vector<int>& seq, const std::vector<Point>& pts,
                          const Box& box) {
    double L = 0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        L += dist(pts[seq[i]], pts[seq[i + 1]], box);
    return L;
}

/// Rotate/flip a cyclic order into canonical form: smallest member first,
/// then the direction whose second element is smaller.
inline std::vector<int> canonical_cycle(std::vector<int> order) {
    if (order.size() <= 1) return order;
    auto it = std::min_element(order.begin(), order.end());
    std::rotate(order.begin(), it, order.end());
    if (order.size() > 2 && order.back() < order[1]) {
        std::reverse(order.begin() + 1, order.end());
    }
    return order;
}

inline bool is_permutation_of_n(const std::vector<int>& order, int n) {
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : order) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

inline std::vector<Edge> tour_edges(const std::vector<int>& order) {
    std::vector<Edge> es;
    const int n = static_cast<int>(order.size());
    es.reserve(n);
    for (int i = 0; i < n; ++i) es.emplace_back(order[i], order[(i + 1) % n]);
    return es;
}

// ---------------------------------------------------------------------------
// Branching constraints: forced edge set I and forbidden edge set O.
// ---------------------------------------------------------------------------

struct EdgeConstraints {
    EdgeSet forced;
    EdgeSet forbidden;

    bool empty() const { return forced.empty() && forbidden.empty(); }
    bool is_forbidden(int a, int b) const { return forbidden.count(Edge(a, b)) > 0; }
    bool is_forced(int a, int b) const { return forced.count(Edge(a, b)) > 0; }
    bool decided(const Edge& e) const { return forced.count(e) || forbidden.count(e); }
};

/// A maximal forced path, contracted to a traversal unit with two ports
/// (seq.front() and seq.back(); equal for a free vertex).
struct Entity {
    std::vector<int> seq;
    int port(int side) const { return side == 0 ? seq.front() : seq.back(); }
    bool single() const { return seq.size() == 1; }
};

struct Decomposition {
    std::vector<Entity> entities;
    bool complete_cycle = false;       // forced edges already form a Hamiltonian cycle
    std::vector<int> cycle_order;      // set when complete_cycle
    bool feasible = true;
    const char* reason = "";
};

/// Split vertices 0..n-1 into forced paths. Detects structural infeasibility:
/// a forced vertex degree of 3, I intersecting O, or a subcycle shorter than n.
inline Decomposition decompose_forced(int n, const EdgeConstraints& cons) {
    Decomposition out;
    for (const Edge& e : cons.forced) {
        if (cons.forbidden.count(e)) {
            out.feasible = false;
            out.reason = "edge both forced and forbidden";
            return out;
        }
    }
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : cons.forced) {
        if (e.u >= n || e.v >= n) throw std::invalid_argument("constraint edge out of range");
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
        if (adj[e.u].size() > 2 || adj[e.v].size() > 2) {
            out.feasible = false;
            out.reason = "forced degree 3";
            return out;
        }
    }
    std::vector<char> visited(n, 0);
    // Walk paths starting from degree<=1 vertices, smallest index first.
    for (int s = 0; s < n; ++s) {
        if (visited[s] || adj[s].size() == 2) continue;
        Entity ent;
        int prev = -1, cur = s;
        while (true) {
            visited[cur] = 1;
            ent.seq.push_back(cur);
            int next = -1;
            for (int w : adj[cur])
                if (w != prev) next = w;
            if (next == -1) break;
            prev = cur;
            cur = next;
        }
        out.entities.push_back(std::move(ent));
    }
    // Anything left unvisited with degree 2 sits on a forced cycle.
    for (int s = 0; s < n; ++s) {
        if (visited[s]) continue;
        std::vector<int> cyc;
        int prev = -1, cur = s;
        while (!visited[cur]) {
            visited[cur] = 1;
            cyc.push_back(cur);
            int next = (adj[cur][0] != prev) ? adj[cur][0] : adj[cur][1];
            prev = cur;
            cur = next;
        }
        if (static_cast<int>(cyc.size()) == n && out.entities.empty()) {
            out.complete_cycle = true;
            out.cycle_order = canonical_cycle(cyc);
            return out;
        }
        out.feasible = false;
        out.reason = "forced subcycle";
        return out;
    }
    return out;
}

/// Quick structural feasibility: decomposition valid and every vertex retains
/// at least 2 permitted incident edges.
inline bool constraints_feasible(int n, const EdgeConstraints& cons) {
    Decomposition dec = decompose_forced(n, cons);
    if (!dec.feasible) return false;
    if (dec.complete_cycle) {
        for (const Edge& e : tour_edges(dec.cycle_order))
            if (cons.forbidden.count(e)) return false;
        return true;
    }
    std::vector<int> banned(n, 0), forced_deg(n, 0);
    for (const Edge& e : cons.forbidden) {
        ++banned[e.u];
        ++banned[e.v];
    }
    for (const Edge& e : cons.forced) {
        ++forced_deg[e.u];
        ++forced_deg[e.v];
    }
    for (int v = 0; v < n; ++v) {
        int avail = (n - 1) - banned[v];
        if (avail < 2 || forced_deg[v] > 2) return false;
    }
    return true;
}

}  // namespace tsplab

#endif
