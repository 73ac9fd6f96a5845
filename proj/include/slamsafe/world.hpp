#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slamsafe/geometry.hpp"

namespace slamsafe {

// Planar robot/camera pose. theta stays normalized into (-pi, pi].
struct Pose {
    double x{0.0};
    double y{0.0};
    double theta{0.0};

    Vec2 position() const { return {x, y}; }
    Vec2 heading() const { return unit_from_angle(theta); }
};

inline Pose make_pose(double x, double y, double theta) {
    return {x, y, wrap_angle(theta)};
}

// A mapped point living on a wall surface. normal faces away from the wall
// (the typical first-observation direction); scale is the characteristic
// detection distance. Both exist only for the next-best-view baseline.
struct Landmark {
    int id{0};
    Vec2 position;
    Vec2 normal{1.0, 0.0};
    double scale{1.0};
};

struct CameraModel {
    double half_fov{deg_to_rad(31.0)};
    double max_range{8.0};
    double min_range{0.3};
};

enum class Direction : int { forward = 0, backward = 1 };

inline const char* to_string(Direction d) {
    return d == Direction::forward ? "forward" : "backward";
}

class WorldMap {
public:
    std::string name;
    Rect bounds;
    std::vector<Segment> walls;
    std::vector<Landmark> landmarks;
    Pose start;
    Vec2 goal;

    // Buckets landmark indices on a coarse grid; call after any change to
    // the landmark set. Query helpers fall back to a linear scan when the
    // index is stale or absent.
    void rebuild_index(double cell_size = 4.0);

    // Indices of landmarks whose grid cells intersect the disk around
    // `center` with radius `radius`. Superset of the true in-range set.
    void candidates_near(const Vec2& center, double radius,
                         std::vector<int>& out) const;

    // Throws ConfigError if any structural invariant is violated: start and
    // goal must lie inside bounds away from walls, landmark normals must be
    // unit length, scales positive, and every landmark must sit within 1 cm
    // of some wall.
    void validate() const;

    bool index_valid() const { return index_valid_; }

private:
    double cell_size_{4.0};
    int grid_nx_{0}, grid_ny_{0};
    std::vector<std::vector<int>> grid_;
    bool index_valid_{false};

    int cell_of(double x, double y) const;
};

// True iff `lm` is visible from `p`: in range, inside the view cone, and the
// open sight segment crosses no wall. Boundary values count as visible.
bool landmark_visible(const WorldMap& map, const CameraModel& cam,
                      const Pose& p, const Landmark& lm);

// Sorted ids of all landmarks visible from p.
std::vector<int> visible_set(const WorldMap& map, const CameraModel& cam, const Pose& p);

// |visible_set(p1) ∩ visible_set(p2)|, capped at 600.
int fov_overlap(const WorldMap& map, const CameraModel& cam,
                const Pose& p1, const Pose& p2);

// Indices into map.landmarks visible from p — the hot-path variant that
// avoids id translation and lets callers reuse the scratch buffer.
void visible_indices(const WorldMap& map, const CameraModel& cam, const Pose& p,
                     std::vector<int>& scratch, std::vector<int>& out);

// fov_overlap against a base pose whose visible indices were precomputed
// with visible_indices; evaluating many candidates from one pose this way
// skips recomputing the base visibility each time.
int fov_overlap_from(const WorldMap& map, const CameraModel& cam,
                     const std::vector<int>& base_visible, const Pose& p2);

inline constexpr int kOverlapCap = 600;

// Unicycle step: rotate by dtheta, then translate dist along (or against)
// the new heading. Throws CollisionError if the swept segment crosses a wall.
Pose step_kinematics(const WorldMap& map, const Pose& p, Direction direction,
                     double dtheta, double dist);

// Collision predicate for the same sweep, without the throw.
bool sweep_collides(const WorldMap& map, const Vec2& from, const Vec2& to);

}  // namespace slamsafe
