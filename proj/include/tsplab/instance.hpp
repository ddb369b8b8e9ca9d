#ifndef TSPLAB_INSTANCE_HPP
#define TSPLAB_INSTANCE_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tsplab/geometry.hpp"
#include "tsplab/rng.hpp"

namespace tsplab {

/// Metadata for one planted gadget copy. `kind` plus `params` are enough to
/// rebuild the gadget deterministically (see gadgets.hpp).
struct PlantRecord {
    std::string kind;
    Point center;
    std::vector<int> members;  // 0-based indices into Instance::points
    double clearance = 0.0;
    std::map<std::string, double> params;
};

/// Indexed point set. Index order is the tie-breaking order of the heuristics
/// (vertex 0 plays the paper's x_1).
struct Instance {
    std::vector<Point> points;
    Box box;
    int precision_bits = 53;
    std::optional<std::uint64_t> seed;
    std::vector<PlantRecord> plants;

    int size() const { return static_cast<int>(points.size()); }
};

/// n i.i.d. uniform points in [0,t)^d with t = n^(1/d).
inline Instance gen_uniform(int n, int d, std::uint64_t seed,
                            Topology topo = Topology::torus) {
    if (n < 1) throw std::invalid_argument("gen_uniform: n must be >= 1");
    Instance inst;
    inst.box = Box(d, std::pow(static_cast<double>(n), 1.0 / d), topo);
    inst.seed = seed;
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, inst.box.t);
    inst.points.reserve(n);
    for (int i = 0; i < n; ++i) {
        Point p(d);
        for (int k = 0; k < d; ++k) p[k] = u(rng);
        inst.points.push_back(std::move(p));
    }
    return inst;
}

struct DiscretizeResult {
    Instance instance;
    std::vector<std::pair<int, int>> duplicates;  // (index, earlier identical index)
};

/// Snap every coordinate to the 2^bits grid on [0,t). Grid collisions are
/// retained and reported.
inline DiscretizeResult discretize(const Instance& inst, int bits) {
    if (bits < 1) throw std::invalid_argument("discretize: bits must be >= 1");
    DiscretizeResult out;
    out.instance = inst;
    out.instance.precision_bits = bits;
    const double cells = std::ldexp(1.0, bits);
    const double t = inst.box.t;
    for (Point& p : out.instance.points) {
        for (double& x : p) {
            double j = std::nearbyint(x / t * cells);
            if (inst.box.topology == Topology::torus) {
                if (j >= cells) j -= cells;
                if (j < 0) j += cells;
            } else {
                j = std::clamp(j, 0.0, cells - 1);
            }
            x = t * j / cells;
        }
    }
    std::map<Point, int> seen;
    for (int i = 0; i < out.instance.size(); ++i) {
        auto [it, fresh] = seen.emplace(out.instance.points[i], i);
        if (!fresh) out.duplicates.emplace_back(i, it->second);
    }
    return out;
}

struct PlantOutcome {
    Instance instance;
    PlantRecord record;
};

/// Insert a gadget (local coordinates, anchor at the origin) translated to
/// `center`. Original points within `clearance` of any gadget point are
/// removed; gadget points are appended after the survivors so the whole copy
/// lies in X_K for K up to the survivor count.
inline PlantOutcome plant(const Instance& inst, const std::vector<Point>& gadget_pts,
                          const Point& center, double clearance,
                          const std::string& kind = "gadget",
                          std::map<std::string, double> params = {},
                          int min_survivors = 0) {
    check_dim(center, inst.box);
    if (!(clearance > 0)) throw std::invalid_argument("plant: clearance must be > 0");
    std::vector<Point> members;
    members.reserve(gadget_pts.size());
    for (const Point& g : gadget_pts) {
        check_dim(g, inst.box);
        Point q(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) q[i] = center[i] + g[i];
        if (inst.box.topology == Topology::torus) {
            q = wrap_point(std::move(q), inst.box);
        } else {
            for (double x : q)
                if (x < 0 || x >= inst.box.t)
                    throw std::invalid_argument("plant: gadget overflows box");
        }
        members.push_back(std::move(q));
    }

    PlantOutcome out;
    out.instance.box = inst.box;
    out.instance.precision_bits = inst.precision_bits;
    out.instance.seed = inst.seed;
    std::vector<int> remap(inst.size(), -1);
    for (int i = 0; i < inst.size(); ++i) {
        bool keep = true;
        for (const Point& mpt : members) {
            if (dist(inst.points[i], mpt, inst.box) < clearance) {
                keep = false;
                break;
            }
        }
        if (keep) {
            remap[i] = out.instance.size();
            out.instance.points.push_back(inst.points[i]);
        }
    }
    if (out.instance.size() < min_survivors)
        throw std::runtime_error("plant: fewer survivors than required (K)");
    for (const PlantRecord& old : inst.plants) {
        PlantRecord rec = old;
        for (int& idx : rec.members) {
            if (remap[idx] < 0)
                throw std::runtime_error("plant: clearance removes points of an existing plant");
            idx = remap[idx];
        }
        out.instance.plants.push_back(std::move(rec));
    }

    out.record.kind = kind;
    out.record.center = wrap_point(center, inst.box);
    out.record.clearance = clearance;
    out.record.params = std::move(params);
    for (const Point& mpt : members) {
        out.record.members.push_back(out.instance.size());
        out.instance.points.push_back(mpt);
    }
    out.instance.plants.push_back(out.record);
    return out;
}

/// Append loose points (used by test harnesses to add approach guides).
inline Instance with_extra_points(Instance inst, const std::vector<Point>& extra) {
    for (const Point& p : extra) inst.points.push_back(wrap_point(p, inst.box));
    return inst;
}

}  // namespace tsplab

#endif
