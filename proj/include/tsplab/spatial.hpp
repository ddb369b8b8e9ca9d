#ifndef TSPLAB_SPATIAL_HPP
#define TSPLAB_SPATIAL_HPP

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tsplab/geometry.hpp"

namespace tsplab {

/// Hash grid over a box for ball queries. Cell size is chosen by the caller;
/// queries scan the 3^d cell neighborhood of the target (and wrap on the
/// torus), so they are exact for radii <= cell size.
class GridIndex {
public:
    GridIndex(const std::vector<Point>& pts, const Box& box, double cell)
        : pts_(&pts), box_(box) {
        cells_per_axis_ = std::max(1L, static_cast<long>(std::floor(box.t / cell)));
        cell_ = box.t / static_cast<double>(cells_per_axis_);
        for (int i = 0; i < static_cast<int>(pts.size()); ++i)
            table_[key(pts[i])].push_back(i);
    }

    /// Indices of points with dist(p, x) < r (strict). r may exceed the cell
    /// size; the scan radius widens accordingly.
    std::vector<int> query_ball(const Point& p, double r) const {
        std::vector<int> out;
        const int reach = static_cast<int>(std::ceil(r / cell_));
        std::vector<long> base(box_.d);
        for (int i = 0; i < box_.d; ++i) base[i] = coord_cell(p[i]);
        std::vector<int> off(box_.d, -reach);
        const double r2 = r * r;
        while (true) {
            std::int64_t k = 0;
            bool in_range = true;
            for (int i = 0; i < box_.d; ++i) {
                long c = base[i] + off[i];
                if (box_.topology == Topology::torus) {
                    c %= cells_per_axis_;
                    if (c < 0) c += cells_per_axis_;
                } else if (c < 0 || c >= cells_per_axis_) {
                    in_range = false;
                    break;
                }
                k = k * (cells_per_axis_ + 1) + c;
            }
            if (in_range) {
                auto it = table_.find(k);
                if (it != table_.end())
                    for (int idx : it->second)
                        if (dist2((*pts_)[idx], p, box_) < r2) out.push_back(idx);
            }
            int i = 0;
            for (; i < box_.d; ++i) {
                if (++off[i] <= reach) break;
                off[i] = -reach;
            }
            if (i == box_.d) break;
        }
        return out;
    }

    double cell_size() const { return cell_; }

private:
    long coord_cell(double x) const {
        long c = static_cast<long>(std::floor(x / cell_));
        if (c < 0) c = 0;
        if (c >= cells_per_axis_) c = cells_per_axis_ - 1;
        return c;
    }

    std::int64_t key(const Point& p) const {
        std::int64_t k = 0;
        for (int i = 0; i < box_.d; ++i) k = k * (cells_per_axis_ + 1) + coord_cell(p[i]);
        return k;
    }

    const std::vector<Point>* pts_;
    Box box_;
    long cells_per_axis_ = 1;
    double cell_ = 1.0;
    std::unordered_map<std::int64_t, std::vector<int>> table_;
};

}  // namespace tsplab

#endif
