#include "slamsafe/world.hpp"

#include <algorithm>
#include <cmath>

#include "slamsafe/errors.hpp"

namespace slamsafe {

int WorldMap::cell_of(double x, double y) const {
    int cx = static_cast<int>(std::floor((x - bounds.xmin) / cell_size_));
    int cy = static_cast<int>(std::floor((y - bounds.ymin) / cell_size_));
    cx = std::clamp(cx, 0, grid_nx_ - 1);
    cy = std::clamp(cy, 0, grid_ny_ - 1);
    return cy * grid_nx_ + cx;
}

void WorldMap::rebuild_index(double cell_size) {
    cell_size_ = cell_size;
    grid_nx_ = std::max(1, static_cast<int>(std::ceil(bounds.width() / cell_size_)));
    grid_ny_ = std::max(1, static_cast<int>(std::ceil(bounds.height() / cell_size_)));
    grid_.assign(static_cast<std::size_t>(grid_nx_) * grid_ny_, {});
    for (int i = 0; i < static_cast<int>(landmarks.size()); ++i) {
        grid_[cell_of(landmarks[i].position.x, landmarks[i].position.y)].push_back(i);
    }
    index_valid_ = true;
}

void WorldMap::candidates_near(const Vec2& center, double radius,
                               std::vector<int>& out) const {
    out.clear();
    if (!index_valid_) {
        out.resize(landmarks.size());
        for (int i = 0; i < static_cast<int>(landmarks.size()); ++i) out[i] = i;
        return;
    }
    const int cx0 = std::clamp(
        static_cast<int>(std::floor((center.x - radius - bounds.xmin) / cell_size_)), 0,
        grid_nx_ - 1);
    const int cx1 = std::clamp(
        static_cast<int>(std::floor((center.x + radius - bounds.xmin) / cell_size_)), 0,
        grid_nx_ - 1);
    const int cy0 = std::clamp(
        static_cast<int>(std::floor((center.y - radius - bounds.ymin) / cell_size_)), 0,
        grid_ny_ - 1);
    const int cy1 = std::clamp(
        static_cast<int>(std::floor((center.y + radius - bounds.ymin) / cell_size_)), 0,
        grid_ny_ - 1);
    for (int cy = cy0; cy <= cy1; ++cy) {
        for (int cx = cx0; cx <= cx1; ++cx) {
            const auto& bucket = grid_[static_cast<std::size_t>(cy) * grid_nx_ + cx];
            out.insert(out.end(), bucket.begin(), bucket.end());
        }
    }
}

void WorldMap::validate() const {
    constexpr double kWallEps = 0.01;  // landmarks live on surfaces
    if (bounds.width() <= 0.0 || bounds.height() <= 0.0)
        throw ConfigError("map '" + name + "': empty bounds");
    if (!bounds.contains(start.position()))
        throw ConfigError("map '" + name + "': start outside bounds");
    if (!bounds.contains(goal))
        throw ConfigError("map '" + name + "': goal outside bounds");
    for (const auto& w : walls) {
        if (point_segment_distance(start.position(), w) < 1e-3)
            throw ConfigError("map '" + name + "': start inside a wall");
        if (point_segment_distance(goal, w) < 1e-3)
            throw ConfigError("map '" + name + "': goal inside a wall");
    }
    for (const auto& lm : landmarks) {
        if (std::abs(norm(lm.normal) - 1.0) > 1e-9)
            throw ConfigError("map '" + name + "': landmark normal not unit length");
        if (!(lm.scale > 0.0))
            throw ConfigError("map '" + name + "': landmark scale must be positive");
        double best = walls.empty() ? 0.0 : 1e300;
        for (const auto& w : walls) best = std::min(best, point_segment_distance(lm.position, w));
        if (best > kWallEps)
            throw ConfigError("map '" + name + "': landmark off-wall by more than 1 cm");
    }
}

bool landmark_visible(const WorldMap& map, const CameraModel& cam,
                      const Pose& p, const Landmark& lm) {
    const Vec2 d = lm.position - p.position();
    const double d2 = norm2(d);
    const double r_lo = cam.min_range - kGeomEps;
    const double r_hi = cam.max_range + kGeomEps;
    if (d2 < r_lo * r_lo || d2 > r_hi * r_hi) return false;

    // Cone test without atan2: cos(bearing diff) >= cos(half_fov), with the
    // boundary counting as visible.
    const double dl = std::sqrt(d2);
    const double proj = dot(p.heading(), d);
    if (proj + kGeomEps * dl < std::cos(cam.half_fov) * dl) return false;

    for (const auto& w : map.walls) {
        if (segment_blocks_sight(p.position(), lm.position, w.a, w.b)) return false;
    }
    return true;
}

std::vector<int> visible_set(const WorldMap& map, const CameraModel& cam, const Pose& p) {
    std::vector<int> candidates;
    map.candidates_near(p.position(), cam.max_range, candidates);
    std::vector<int> ids;
    ids.reserve(candidates.size() / 2);
    for (int i : candidates) {
        if (landmark_visible(map, cam, p, map.landmarks[i])) ids.push_back(map.landmarks[i].id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

int fov_overlap(const WorldMap& map, const CameraModel& cam,
                const Pose& p1, const Pose& p2) {
    // Count members of V(p1) also visible from p2; equivalent to the sorted
    // set intersection but never materializes V(p2).
    std::vector<int> candidates;
    map.candidates_near(p1.position(), cam.max_range, candidates);
    int count = 0;
    for (int i : candidates) {
        const Landmark& lm = map.landmarks[i];
        if (!landmark_visible(map, cam, p1, lm)) continue;
        if (!landmark_visible(map, cam, p2, lm)) continue;
        if (++count >= kOverlapCap) return kOverlapCap;
    }
    return count;
}

void visible_indices(const WorldMap& map, const CameraModel& cam, const Pose& p,
                     std::vector<int>& scratch, std::vector<int>& out) {
    map.candidates_near(p.position(), cam.max_range, scratch);
    out.clear();
    for (int i : scratch) {
        if (landmark_visible(map, cam, p, map.landmarks[i])) out.push_back(i);
    }
}

int fov_overlap_from(const WorldMap& map, const CameraModel& cam,
                     const std::vector<int>& base_visible, const Pose& p2) {
    int count = 0;
    for (int i : base_visible) {
        if (!landmark_visible(map, cam, p2, map.landmarks[i])) continue;
        if (++count >= kOverlapCap) return kOverlapCap;
    }
    return count;
}

bool sweep_collides(const WorldMap& map, const Vec2& from, const Vec2& to) {
    for (const auto& w : map.walls) {
        if (segments_intersect(from, to, w.a, w.b)) return true;
    }
    return false;
}

Pose step_kinematics(const WorldMap& map, const Pose& p, Direction direction,
                     double dtheta, double dist) {
    if (!(dist > 0.0)) throw RangeError("step_kinematics: dist must be positive");
    const double theta = wrap_angle(p.theta + dtheta);
    const Vec2 h = unit_from_angle(theta);
    const double sign = direction == Direction::forward ? 1.0 : -1.0;
    const Vec2 from = p.position();
    const Vec2 to = from + h * (sign * dist);
    if (sweep_collides(map, from, to)) {
        throw CollisionError("step_kinematics: swept segment crosses a wall");
    }
    return make_pose(to.x, to.y, theta);
}

}  // namespace slamsafe
