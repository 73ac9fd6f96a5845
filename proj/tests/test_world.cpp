#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "slamsafe/errors.hpp"
#include "slamsafe/rng.hpp"
#include "slamsafe/world.hpp"

using namespace slamsafe;

namespace {

WorldMap open_field(double size = 40.0) {
    WorldMap map;
    map.name = "field";
    map.bounds = {0.0, 0.0, size, size};
    map.start = make_pose(size / 2, size / 2, 0.0);
    map.goal = {size - 1.0, size / 2};
    return map;
}

// Independent segment-segment crossing oracle (orientation tests), kept
// deliberately different from the library's parametric implementation.
int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
}

bool crossing_oracle(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

// Cone-and-range membership without any occlusion logic.
bool plain_cone_member(const CameraModel& cam, const Pose& p, const Vec2& lm) {
    const double d = dist(p.position(), lm);
    if (d < cam.min_range || d > cam.max_range) return false;
    const double bearing = std::atan2(lm.y - p.y, lm.x - p.x);
    return std::abs(wrap_angle(bearing - p.theta)) <= cam.half_fov + 1e-9;
}

} // namespace

TEST_CASE("visible_set basic membership") {
    const CameraModel cam;
    WorldMap map = open_field();
    map.landmarks.push_back({7, {25.0, 20.0}, {-1.0, 0.0}, 1.0});  // 5 m dead ahead
    map.rebuild_index();

    const auto ahead = visible_set(map, cam, make_pose(20.0, 20.0, 0.0));
    CHECK(ahead == std::vector<int>{7});

    // Directly behind: bearing difference is pi.
    const auto behind = visible_set(map, cam, make_pose(20.0, 20.0, kPi));
    CHECK(behind.empty());
}

TEST_CASE("visible_set occlusion by a wall") {
    const CameraModel cam;
    WorldMap map = open_field();
    map.landmarks.push_back({3, {25.0, 20.0}, {-1.0, 0.0}, 1.0});
    map.walls.push_back({{23.0, 18.0}, {23.0, 22.0}});
    map.rebuild_index();

    const Pose p = make_pose(20.0, 20.0, 0.0);
    // The independent oracle confirms the wall crosses the sight line.
    CHECK(crossing_oracle(p.position(), {25.0, 20.0}, {23.0, 18.0}, {23.0, 22.0}));
    CHECK(visible_set(map, cam, p).empty());

    // Occlusion soundness: removing the wall restores visibility.
    map.walls.clear();
    CHECK(visible_set(map, cam, p).size() == 1);
}

TEST_CASE("fov_overlap caps at 600") {
    const CameraModel cam;
    WorldMap map = open_field();
    // 700 landmarks along a wall 4 m ahead, all inside the cone and range.
    map.walls.push_back({{24.0, 18.5}, {24.0, 21.5}});
    for (int i = 0; i < 700; ++i) {
        const double y = 18.5 + 3.0 * (i + 0.5) / 700.0;
        map.landmarks.push_back({i, {24.0, y}, {-1.0, 0.0}, 1.0});
    }
    map.rebuild_index();

    const Pose p = make_pose(20.0, 20.0, 0.0);
    CHECK(visible_set(map, cam, p).size() == 700);
    CHECK(fov_overlap(map, cam, p, p) == 600);
}

TEST_CASE("fov_overlap disjoint cones and brute-force agreement") {
    const CameraModel cam;
    WorldMap map = open_field();
    RngStream rng(0x5EED, "test/world/spread");
    for (int i = 0; i < 300; ++i) {
        const Vec2 pos{rng.uniform(14.0, 26.0), rng.uniform(14.0, 26.0)};
        map.landmarks.push_back({i, pos, {1.0, 0.0}, 1.0});
    }
    map.rebuild_index();

    const Pose p1 = make_pose(20.0, 20.0, 0.0);
    const Pose p2 = make_pose(20.0, 20.0, p1.theta + cam.half_fov);  // rotated by half FOV

    // Brute-force membership over all landmarks (no walls, so no occlusion).
    int expected = 0;
    for (const auto& lm : map.landmarks)
        if (plain_cone_member(cam, p1, lm.position) && plain_cone_member(cam, p2, lm.position))
            ++expected;
    CHECK(fov_overlap(map, cam, p1, p2) == expected);

    // Opposite directions, landmarks only ahead of p1.
    WorldMap ahead_only = open_field();
    for (int i = 0; i < 40; ++i)
        ahead_only.landmarks.push_back({i, {23.0 + 0.05 * i, 20.0}, {-1.0, 0.0}, 1.0});
    ahead_only.rebuild_index();
    CHECK(fov_overlap(ahead_only, cam, make_pose(20, 20, 0.0), make_pose(20, 20, kPi)) == 0);
}

TEST_CASE("fov_overlap symmetry and monotone cap") {
    const CameraModel cam;
    WorldMap map = open_field();
    RngStream rng(0xABCD, "test/world/sym");
    for (int i = 0; i < 150; ++i)
        map.landmarks.push_back({i, {rng.uniform(10.0, 30.0), rng.uniform(10.0, 30.0)}, {1, 0}, 1});
    map.rebuild_index();

    for (int k = 0; k < 20; ++k) {
        const Pose a = make_pose(rng.uniform(12, 28), rng.uniform(12, 28), rng.uniform(-3, 3));
        const Pose b = make_pose(rng.uniform(12, 28), rng.uniform(12, 28), rng.uniform(-3, 3));
        const int ab = fov_overlap(map, cam, a, b);
        CHECK(ab == fov_overlap(map, cam, b, a));
        const auto va = visible_set(map, cam, a);
        const auto vb = visible_set(map, cam, b);
        CHECK(ab <= static_cast<int>(std::min(va.size(), vb.size())));
        CHECK(ab <= 600);
    }
}

TEST_CASE("visible_indices / fov_overlap_from match the reference path") {
    const CameraModel cam;
    WorldMap map = open_field();
    RngStream rng(0x77, "test/world/fast");
    map.walls.push_back({{22.0, 16.0}, {22.0, 24.0}});
    for (int i = 0; i < 200; ++i)
        map.landmarks.push_back({i, {rng.uniform(12.0, 28.0), rng.uniform(12.0, 28.0)}, {1, 0}, 1});
    map.rebuild_index();

    std::vector<int> scratch, base;
    for (int k = 0; k < 15; ++k) {
        const Pose a = make_pose(rng.uniform(13, 20), rng.uniform(13, 27), rng.uniform(-3, 3));
        const Pose b = make_pose(rng.uniform(13, 20), rng.uniform(13, 27), rng.uniform(-3, 3));
        visible_indices(map, cam, a, scratch, base);
        CHECK(fov_overlap_from(map, cam, base, b) == fov_overlap(map, cam, a, b));
    }
}

TEST_CASE("step_kinematics unit steps") {
    WorldMap map = open_field();
    const Pose o = make_pose(20.0, 20.0, 0.0);

    const Pose f = step_kinematics(map, o, Direction::forward, 0.0, 1.0);
    CHECK(f.x == doctest::Approx(21.0).epsilon(1e-12));
    CHECK(f.y == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(f.theta == 0.0);

    const Pose b = step_kinematics(map, o, Direction::backward, 0.0, 1.0);
    CHECK(b.x == doctest::Approx(19.0).epsilon(1e-12));
    CHECK(b.theta == 0.0);

    const Pose t = step_kinematics(map, o, Direction::forward, kPi / 2, 1.0);
    CHECK(t.x == doctest::Approx(20.0));
    CHECK(t.y == doctest::Approx(21.0));
    CHECK(t.theta == doctest::Approx(kPi / 2));
}

TEST_CASE("step_kinematics collision and inverse") {
    WorldMap map = open_field();
    map.walls.push_back({{21.0, 15.0}, {21.0, 25.0}});
    const Pose o = make_pose(20.5, 20.0, 0.0);
    CHECK_THROWS_AS(step_kinematics(map, o, Direction::forward, 0.0, 1.0), CollisionError);

    // Forward then backward with dtheta = 0 returns to the start.
    WorldMap clear = open_field();
    const Pose start = make_pose(18.0, 19.0, 0.7);
    const Pose fwd = step_kinematics(clear, start, Direction::forward, 0.0, 1.0);
    const Pose back = step_kinematics(clear, fwd, Direction::backward, 0.0, 1.0);
    CHECK(dist(back.position(), start.position()) < 1e-9);
    CHECK(back.theta == doctest::Approx(start.theta).epsilon(1e-12));
}

TEST_CASE("pose normalization and map validation") {
    CHECK(make_pose(0, 0, 3 * kPi).theta == doctest::Approx(kPi));
    CHECK(make_pose(0, 0, -kPi).theta == doctest::Approx(kPi));  // boundary maps to +pi
    CHECK(wrap_angle(kPi / 4) == doctest::Approx(kPi / 4));

    WorldMap bad = open_field();
    bad.walls.push_back({{0.0, 0.0}, {40.0, 0.0}});
    bad.landmarks.push_back({0, {20.0, 20.0}, {1.0, 0.0}, 1.0});  // 20 m from any wall
    bad.rebuild_index();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
