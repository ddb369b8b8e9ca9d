#ifndef TSPLAB_EXACT_HPP
#define TSPLAB_EXACT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tsplab/geometry.hpp"
#include "tsplab/tour.hpp"

namespace tsplab {

constexpr int kExactDefaultMax = 24;  // subset-DP memory guard

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense symmetric distance matrix.
struct DistMatrix {
    int n = 0;
    std::vector<double> d;
    DistMatrix() = default;
    DistMatrix(const std::vector<Point>& pts, const Box& box)
        : n(static_cast<int>(pts.size())), d(static_cast<std::size_t>(n) * n, 0.0) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                d[static_cast<std::size_t>(i) * n + j] =
                    d[static_cast<std::size_t>(j) * n + i] = dist(pts[i], pts[j], box);
    }
    double operator()(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {

inline void check_dp_size(int n, int n_max) {
    if (n > n_max) throw std::invalid_argument("exact solver: n exceeds n_max");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Held-Karp dynamic programs. Ties among optimal solutions are broken toward
// the lexicographically smallest canonical index sequence; reconstruction
// walks the DP with bitwise equality, so it is deterministic.
// ---------------------------------------------------------------------------

/// Minimum-length Hamiltonian cycle. The returned order starts at vertex 0.
inline Tour held_karp_tour(const std::vector<Point>& pts, const Box& box,
                           int n_max = kExactDefaultMax) {
    const int n = static_cast<int>(pts.size());
    if (n < 1) throw std::invalid_argument("held_karp_tour: empty input");
    detail::check_dp_size(n, n_max);
    DistMatrix D(pts, box);
    if (n == 1) return Tour{{0}, 0.0};
    if (n == 2) return Tour{{0, 1}, 2 * D(0, 1)};

    const int m = n - 1;  // vertices 1..n-1 mapped to bits 0..m-1
    const std::size_t full = (std::size_t{1} << m) - 1;
    // B[mask][v]: best cost of a path starting at v, covering mask (v in mask),
    // ending with the edge back to vertex 0.
    std::vector<double> B(static_cast<std::size_t>(full + 1) * m, kInf);
    auto at = [m](std::size_t mask, int v) -> std::size_t { return mask * m + v; };
    for (int v = 0; v < m; ++v) B[at(std::size_t{1} << v, v)] = D(v + 1, 0);
    for (std::size_t mask = 1; mask <= full; ++mask) {
        if ((mask & (mask - 1)) == 0) continue;
        for (int v = 0; v < m; ++v) {
            if (!(mask >> v & 1)) continue;
            const std::size_t rest = mask ^ (std::size_t{1} << v);
            double best = kInf;
            for (int w = 0; w < m; ++w) {
                if (!(rest >> w & 1)) continue;
                double c = D(v + 1, w + 1) + B[at(rest, w)];
                if (c < best) best = c;
            }
            B[at(mask, v)] = best;
        }
    }
    double opt = kInf;
    for (int v = 0; v < m; ++v) opt = std::min(opt, D(0, v + 1) + B[at(full, v)]);

    std::vector<int> order{0};
    std::size_t rem = full;
    int cur = -1;  // -1 encodes vertex 0
    for (int step = 0; step < m; ++step) {
        const double target = (cur < 0) ? opt : B[at(rem | (std::size_t{1} << cur), cur)];
        int chosen = -1;
        for (int w = 0; w < m; ++w) {
            if (!(rem >> w & 1)) continue;
            double c = ((cur < 0) ? D(0, w + 1) : D(cur + 1, w + 1)) + B[at(rem, w)];
            if (c == target) {
                chosen = w;
                break;
            }
        }
        if (chosen < 0) throw std::logic_error("held_karp_tour: reconstruction failed");
        order.push_back(chosen + 1);
        rem ^= std::size_t{1} << chosen;
        cur = chosen;
    }
    return Tour{std::move(order), opt};
}

struct PathResult {
    PathSeq seq;
    double length = 0.0;
};

/// Shortest Hamiltonian path with free endpoints (minimized over all pairs).
inline PathResult held_karp_path_free(const std::vector<Point>& pts, const Box& box,
                                      int n_max = kExactDefaultMax) {
    const int n = static_cast<int>(pts.size());
    if (n < 1) throw std::invalid_argument("held_karp_path: empty input");
    detail::check_dp_size(n, n_max);
    DistMatrix D(pts, box);
    if (n == 1) return {{0}, 0.0};

    const std::size_t full = (std::size_t{1} << n) - 1;
    // Dp[mask][v]: best path covering mask with endpoint v (= best path
    // starting at v by reversal).
    std::vector<double> Dp(static_cast<std::size_t>(full + 1) * n, kInf);
    auto at = [n](std::size_t mask, int v) -> std::size_t { return mask * n + v; };
    for (int v = 0; v < n; ++v) Dp[at(std::size_t{1} << v, v)] = 0.0;
    for (std::size_t mask = 1; mask <= full; ++mask) {
        if ((mask & (mask - 1)) == 0) continue;
        for (int v = 0; v < n; ++v) {
            if (!(mask >> v & 1)) continue;
            const std::size_t rest = mask ^ (std::size_t{1} << v);
            double best = kInf;
            for (int w = 0; w < n; ++w) {
                if (!(rest >> w & 1)) continue;
                double c = D(v, w) + Dp[at(rest, w)];
                if (c < best) best = c;
            }
            Dp[at(mask, v)] = best;
        }
    }
    double opt = kInf;
    for (int v = 0; v < n; ++v) opt = std::min(opt, Dp[at(full, v)]);

    PathSeq seq;
    int cur = -1;
    std::size_t rem = full;
    for (int step = 0; step < n; ++step) {
        int chosen = -1;
        if (cur < 0) {
            for (int v = 0; v < n; ++v)
                if (Dp[at(full, v)] == opt) {
                    chosen = v;
                    break;
                }
        } else {
            const double target = Dp[at(rem | (std::size_t{1} << cur), cur)];
            for (int w = 0; w < n; ++w) {
                if (!(rem >> w & 1)) continue;
                if (D(cur, w) + Dp[at(rem, w)] == target) {
                    chosen = w;
                    break;
                }
            }
        }
        if (chosen < 0) throw std::logic_error("held_karp_path: reconstruction failed");
        seq.push_back(chosen);
        rem ^= std::size_t{1} << chosen;
        cur = chosen;
    }
    return {std::move(seq), opt};
}

/// Shortest Hamiltonian path with fixed endpoint pair {w0,z0}. The sequence is
/// reported from the smaller endpoint.
inline PathResult held_karp_path_fixed(const std::vector<Point>& pts, const Box& box,
                                       int w0, int z0, int n_max = kExactDefaultMax) {
    const int n = static_cast<int>(pts.size());
    if (n < 2) throw std::invalid_argument("held_karp_path: need n >= 2");
    if (w0 == z0 || w0 < 0 || z0 < 0 || w0 >= n || z0 >= n)
        throw std::invalid_argument("held_karp_path: bad endpoints");
    detail::check_dp_size(n, n_max);
    const int a = std::min(w0, z0), b = std::max(w0, z0);
    DistMatrix D(pts, box);
    if (n == 2) return {{a, b}, D(a, b)};

    // Map vertices != b onto bits 0..n-2.
    std::vector<int> fwd(n, -1), rev(n - 1, -1);
    {
        int k = 0;
        for (int v = 0; v < n; ++v)
            if (v != b) {
                fwd[v] = k;
                rev[k] = v;
                ++k;
            }
    }
    const int m = n - 1;
    const std::size_t full = (std::size_t{1} << m) - 1;
    // E[mask][v]: best path starting at v, covering mask, then ending at b.
    std::vector<double> E(static_cast<std::size_t>(full + 1) * m, kInf);
    auto at = [m](std::size_t mask, int v) -> std::size_t { return mask * m + v; };
    for (int v = 0; v < m; ++v) E[at(std::size_t{1} << v, v)] = D(rev[v], b);
    for (std::size_t mask = 1; mask <= full; ++mask) {
        if ((mask & (mask - 1)) == 0) continue;
        for (int v = 0; v < m; ++v) {
            if (!(mask >> v & 1)) continue;
            const std::size_t rest = mask ^ (std::size_t{1} << v);
            double best = kInf;
            for (int w = 0; w < m; ++w) {
                if (!(rest >> w & 1)) continue;
                double c = D(rev[v], rev[w]) + E[at(rest, w)];
                if (c < best) best = c;
            }
            E[at(mask, v)] = best;
        }
    }
    const int astart = fwd[a];
    const double opt = E[at(full, astart)];

    PathSeq seq{a};
    std::size_t rem = full ^ (std::size_t{1} << astart);
    int cur = astart;
    while (rem) {
        const double target = E[at(rem | (std::size_t{1} << cur), cur)];
        int chosen = -1;
        for (int w = 0; w < m; ++w) {
            if (!(rem >> w & 1)) continue;
            if (D(rev[cur], rev[w]) + E[at(rem, w)] == target) {
                chosen = w;
                break;
            }
        }
        if (chosen < 0) throw std::logic_error("held_karp_path_fixed: reconstruction failed");
        seq.push_back(rev[chosen]);
        rem ^= std::size_t{1} << chosen;
        cur = chosen;
    }
    seq.push_back(b);
    return {std::move(seq), opt};
}

// ---------------------------------------------------------------------------
// Permutation brute force (independent oracle; n <= 10)
// ---------------------------------------------------------------------------

enum class BruteMode { tour, path_free, path_fixed };

struct BruteResult {
    double length = kInf;
    std::vector<int> seq;
};

inline BruteResult brute_force(const std::vector<Point>& pts, const Box& box,
                               BruteMode mode, int w0 = -1, int z0 = -1) {
    const int n = static_cast<int>(pts.size());
    if (n < 1) throw std::invalid_argument("brute_force: empty input");
    if (n > 10) throw std::invalid_argument("brute_force: n too large");
    DistMatrix D(pts, box);
    auto seq_len = [&](const std::vector<int>& s, bool close) {
        double L = 0;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) L += D(s[i], s[i + 1]);
        if (close && s.size() > 1) L += D(s.back(), s.front());
        return L;
    };
    BruteResult best;
    auto consider = [&](const std::vector<int>& s, double L) {
        if (L < best.length || (L == best.length && s < best.seq)) {
            best.length = L;
            best.seq = s;
        }
    };

    if (mode == BruteMode::tour) {
        if (n == 1) return {0.0, {0}};
        std::vector<int> perm;
        for (int v = 1; v < n; ++v) perm.push_back(v);
        do {
            std::vector<int> s{0};
            s.insert(s.end(), perm.begin(), perm.end());
            consider(s, seq_len(s, true));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    if (mode == BruteMode::path_free) {
        std::vector<int> perm;
        for (int v = 0; v < n; ++v) perm.push_back(v);
        do {
            std::vector<int> s = perm;
            if (s.size() > 1 && s.back() < s.front()) continue;  // canonical direction
            consider(s, seq_len(s, false));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    // path_fixed
    if (w0 == z0 || w0 < 0 || z0 < 0 || w0 >= n || z0 >= n)
        throw std::invalid_argument("brute_force: bad endpoints");
    const int a = std::min(w0, z0), b = std::max(w0, z0);
    std::vector<int> mid;
    for (int v = 0; v < n; ++v)
        if (v != a && v != b) mid.push_back(v);
    if (mid.empty()) return {D(a, b), {a, b}};
    do {
        std::vector<int> s{a};
        s.insert(s.end(), mid.begin(), mid.end());
        s.push_back(b);
        consider(s, seq_len(s, false));
    } while (std::next_permutation(mid.begin(), mid.end()));
    return best;
}

// ---------------------------------------------------------------------------
// Exact constrained optimum over contracted forced paths (used by bnb).
// ---------------------------------------------------------------------------

inline std::optional<Tour> exact_constrained_tour(const std::vector<Point>& pts,
                                                  const Box& box,
                                                  const EdgeConstraints& cons,
                                                  int n_max = kExactDefaultMax) {
    const int n = static_cast<int>(pts.size());
    if (n < 3) throw std::invalid_argument("exact_constrained_tour: need n >= 3");
    Decomposition dec = decompose_forced(n, cons);
    if (!dec.feasible) return std::nullopt;
    if (dec.complete_cycle) {
        for (const Edge& e : tour_edges(dec.cycle_order))
            if (cons.forbidden.count(e)) return std::nullopt;
        return Tour{dec.cycle_order, tour_length(dec.cycle_order, pts, box)};
    }
    const int m = static_cast<int>(dec.entities.size());
    detail::check_dp_size(m, n_max);
    DistMatrix D(pts, box);
    auto priced = [&](int u, int v) {
        return cons.is_forbidden(u, v) ? kInf : D(u, v);
    };
    double internal = 0;
    for (const Entity& e : dec.entities)
        for (std::size_t i = 0; i + 1 < e.seq.size(); ++i)
            internal += D(e.seq[i], e.seq[i + 1]);

    if (m == 1) {
        const auto& s = dec.entities[0].seq;
        double close = priced(s.front(), s.back());
        if (close == kInf) return std::nullopt;
        return Tour{canonical_cycle(s), internal + close};
    }

    // Entity 0 is the start; DP over the remaining m-1 entities with the exit
    // side of the current entity as extra state.
    const int r = m - 1;
    const std::size_t full = (std::size_t{1} << r) - 1;
    const std::size_t states = (full + 1) * r * 2;
    std::vector<double> F;
    double best = kInf;
    std::vector<int> best_order;  // entity ids with sides, reconstructed below

    for (int s0 = 0; s0 < (dec.entities[0].single() ? 1 : 2); ++s0) {
        F.assign(states, kInf);
        auto at = [r](std::size_t mask, int j, int s) -> std::size_t {
            return (mask * r + j) * 2 + s;
        };
        const int exit0 = dec.entities[0].port(s0);
        // F[mask][j][s]: visited entities mask (bit j-1 for entity j), standing
        // at entity j's port s after traversing it.
        for (int j = 0; j < r; ++j) {
            const Entity& ent = dec.entities[j + 1];
            for (int s = 0; s < 2; ++s) {
                // entered at the other side, exits at s
                double c = priced(exit0, ent.port(1 - s));
                F[at(std::size_t{1} << j, j, s)] = c;
                if (ent.single()) break;
            }
        }
        for (std::size_t mask = 1; mask <= full; ++mask) {
            if ((mask & (mask - 1)) == 0) continue;
            for (int j = 0; j < r; ++j) {
                if (!(mask >> j & 1)) continue;
                const Entity& ent = dec.entities[j + 1];
                const std::size_t rest = mask ^ (std::size_t{1} << j);
                for (int s = 0; s < 2; ++s) {
                    double bestc = kInf;
                    for (int k = 0; k < r; ++k) {
                        if (!(rest >> k & 1)) continue;
                        const Entity& prev = dec.entities[k + 1];
                        for (int ps = 0; ps < 2; ++ps) {
                            double base = F[at(rest, k, ps)];
                            if (base == kInf) continue;
                            double c = base + priced(prev.port(ps), ent.port(1 - s));
                            if (c < bestc) bestc = c;
                            if (prev.single()) break;
                        }
                    }
                    F[at(mask, j, s)] = bestc;
                    if (ent.single()) break;
                }
            }
        }
        const int enter0 = dec.entities[0].port(1 - s0);
        for (int j = 0; j < r; ++j) {
            const Entity& ent = dec.entities[j + 1];
            for (int s = 0; s < 2; ++s) {
                double base = F[at(full, j, s)];
                if (base == kInf) continue;
                double total = base + priced(ent.port(s), enter0);
                if (total < best) {
                    best = total;
                    // reconstruct
                    std::vector<std::pair<int, int>> chain;  // (entity, exit side)
                    std::size_t mask = full;
                    int cj = j, cs = s;
                    while (true) {
                        chain.emplace_back(cj + 1, cs);
                        const std::size_t rest = mask ^ (std::size_t{1} << cj);
                        if (rest == 0) break;
                        const double target = F[at(mask, cj, cs)];
                        const Entity& ent2 = dec.entities[cj + 1];
                        bool found = false;
                        for (int k = 0; k < r && !found; ++k) {
                            if (!(rest >> k & 1)) continue;
                            const Entity& prev = dec.entities[k + 1];
                            for (int ps = 0; ps < 2; ++ps) {
                                double basec = F[at(rest, k, ps)];
                                if (basec != kInf &&
                                    basec + priced(prev.port(ps), ent2.port(1 - cs)) == target) {
                                    mask = rest;
                                    cj = k;
                                    cs = ps;
                                    found = true;
                                    break;
                                }
                                if (prev.single()) break;
                            }
                        }
                        if (!found)
                            throw std::logic_error("exact_constrained_tour: reconstruction failed");
                    }
                    // chain is last..first; expand into vertex order
                    std::vector<int> order;
                    const Entity& e0 = dec.entities[0];
                    std::vector<int> s0seq = e0.seq;
                    if (s0 == 0) std::reverse(s0seq.begin(), s0seq.end());  // exit at port(s0)
                    order.insert(order.end(), s0seq.begin(), s0seq.end());
                    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
                        std::vector<int> seq = dec.entities[it->first].seq;
                        if (it->second == 0) std::reverse(seq.begin(), seq.end());
                        order.insert(order.end(), seq.begin(), seq.end());
                    }
                    best_order = canonical_cycle(order);
                }
                if (ent.single()) break;
            }
        }
        if (dec.entities[0].single()) break;
    }
    if (best == kInf) return std::nullopt;
    return Tour{best_order, internal + best};
}

}  // namespace tsplab

#endif
