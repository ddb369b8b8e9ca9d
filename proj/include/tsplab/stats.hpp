#ifndef TSPLAB_STATS_HPP
#define TSPLAB_STATS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tsplab/geometry.hpp"

namespace tsplab {

namespace detail {

// Regularized lower incomplete gamma P(s,x) by series expansion (x < s+1).
inline double igamma_series(double s, double x) {
    double sum = 1.0 / s, term = sum;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (s + k);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Regularized upper incomplete gamma Q(s,x) by continued fraction (x >= s+1).
inline double igamma_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1 - s, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -i * (i - s);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace detail

/// Upper tail Q(s,x) = 1 - P(s,x) of the regularized incomplete gamma.
inline double gamma_q(double s, double x) {
    if (x < 0 || s <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < s + 1.0) return 1.0 - detail::igamma_series(s, x);
    return detail::igamma_cf(s, x);
}

/// p-value of a chi-square statistic with df degrees of freedom.
inline double chi2_pvalue(double stat, int df) {
    return gamma_q(0.5 * df, 0.5 * stat);
}

/// Chi-square uniformity test over a bins_per_axis^d grid of the box.
/// Returns the p-value; small values reject uniformity.
inline double chi2_uniform_pvalue(const std::vector<Point>& pts, const Box& box,
                                  int bins_per_axis) {
    long cells = 1;
    for (int i = 0; i < box.d; ++i) cells *= bins_per_axis;
    std::vector<long> count(cells, 0);
    for (const Point& p : pts) {
        long idx = 0;
        for (int i = 0; i < box.d; ++i) {
            int b = static_cast<int>(p[i] / box.t * bins_per_axis);
            b = std::clamp(b, 0, bins_per_axis - 1);
            idx = idx * bins_per_axis + b;
        }
        ++count[idx];
    }
    const double expect = static_cast<double>(pts.size()) / cells;
    double stat = 0;
    for (long c : count) {
        double dev = c - expect;
        stat += dev * dev / expect;
    }
    return chi2_pvalue(stat, static_cast<int>(cells) - 1);
}

}  // namespace tsplab

#endif
