#include "slamsafe/nbv.hpp"

#include <algorithm>
#include <cmath>

namespace slamsafe {

namespace {

double angle_between(const Vec2& a, const Vec2& b) {
    return std::abs(std::atan2(cross(a, b), dot(a, b)));
}

}  // namespace

double nbv_quality(const WorldMap& map, const CameraModel& cam, const NBVQualityModel& model,
                   const Pose& p_prev, const Pose& p_next) {
    double sum = 0.0;
    int count = 0;
    for (const Landmark& lm : map.landmarks) {
        if (!landmark_visible(map, cam, p_next, lm)) continue;
        ++count;

        const Vec2 to_prev = p_prev.position() - lm.position;
        const Vec2 to_next = p_next.position() - lm.position;
        const double d_prev = norm(to_prev);
        const double d_next = norm(to_next);
        if (d_prev < 1e-12 || d_next < 1e-12) continue;  // degenerate pose on the landmark

        const double tri = angle_between(to_prev, to_next);
        const double gpq = std::clamp(tri / model.min_triangulation_angle, 0.0, 1.0);

        const double inc_prev = angle_between(lm.normal, to_prev);
        const double inc_next = angle_between(lm.normal, to_next);
        const double diff = inc_prev - inc_next;
        const double falloff =
            std::exp(-(diff * diff) / (2.0 * model.viewing_falloff * model.viewing_falloff));
        const double ratio = std::max(d_prev, d_next) / std::min(d_prev, d_next);
        const double scale_factor = std::min(1.0, model.scale_tolerance / ratio);

        sum += gpq * falloff * scale_factor;
    }
    return count == 0 ? 0.0 : sum / count;
}

}  // namespace slamsafe
