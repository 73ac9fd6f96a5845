#include "slamsafe/trajectory.hpp"

#include <cmath>

#include "slamsafe/errors.hpp"

namespace slamsafe {

Vec2 bernstein_eval(const TrajectorySegment& seg, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw RangeError("bernstein_eval: t must lie in [0, 1]");
    }
    static constexpr double kBinom[6] = {1.0, 5.0, 10.0, 10.0, 5.0, 1.0};
    const double s = 1.0 - t;
    // Powers of t and (1 - t) up to 5.
    double tp[6] = {1.0, t, t * t, 0.0, 0.0, 0.0};
    double sp[6] = {1.0, s, s * s, 0.0, 0.0, 0.0};
    for (int i = 3; i <= 5; ++i) {
        tp[i] = tp[i - 1] * t;
        sp[i] = sp[i - 1] * s;
    }
    Vec2 out{0.0, 0.0};
    for (int i = 0; i <= 5; ++i) {
        const double b = kBinom[i] * tp[i] * sp[5 - i];
        out.x += b * seg.control_points[i].x;
        out.y += b * seg.control_points[i].y;
    }
    return out;
}

TrajectorySegment make_segment(const Vec2& from, const Vec2& to, const Vec2& tangent_from,
                               const Vec2& tangent_to, double handle) {
    const double chord = dist(from, to);
    const double h = handle * chord;
    TrajectorySegment seg;
    seg.control_points[0] = from;
    seg.control_points[1] = from + tangent_from * h;
    seg.control_points[2] = from + tangent_from * (2.0 * h);
    seg.control_points[3] = to - tangent_to * (2.0 * h);
    seg.control_points[4] = to - tangent_to * h;
    seg.control_points[5] = to;
    return seg;
}

double arc_length(const TrajectorySegment& seg, int resolution) {
    double total = 0.0;
    Vec2 prev = seg.control_points[0];
    for (int i = 1; i <= resolution; ++i) {
        const Vec2 cur = bernstein_eval(seg, static_cast<double>(i) / resolution);
        total += dist(prev, cur);
        prev = cur;
    }
    return total;
}

std::vector<Vec2> sample_arclength(const TrajectorySegment& seg, double spacing,
                                   int resolution) {
    // Fine polyline with cumulative lengths.
    std::vector<Vec2> fine(static_cast<std::size_t>(resolution) + 1);
    std::vector<double> cum(fine.size(), 0.0);
    for (int i = 0; i <= resolution; ++i) {
        fine[i] = bernstein_eval(seg, static_cast<double>(i) / resolution);
        if (i > 0) cum[i] = cum[i - 1] + dist(fine[i - 1], fine[i]);
    }
    const double total = cum.back();
    const long long n = std::max(1LL, std::llround(total / spacing));

    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n));
    std::size_t idx = 1;
    for (long long k = 1; k < n; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(n);
        while (idx < cum.size() && cum[idx] < target) ++idx;
        const double seg_len = cum[idx] - cum[idx - 1];
        const double u = seg_len > 0.0 ? (target - cum[idx - 1]) / seg_len : 0.0;
        out.push_back(fine[idx - 1] + (fine[idx] - fine[idx - 1]) * u);
    }
    out.push_back(seg.control_points[5]);
    return out;
}

}  // namespace slamsafe
