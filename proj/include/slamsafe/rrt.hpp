#pragma once

#include <vector>

#include "slamsafe/rng.hpp"
#include "slamsafe/world.hpp"

namespace slamsafe {

struct RrtParams {
    double step{0.8};         // steer distance per extension
    double goal_bias{0.1};    // probability of sampling the goal itself
    double goal_radius{0.8};  // try to connect once a node is this close
    int max_iters{6000};
};

// Collision-free polyline from start to goal (both included). Returns the
// straight chord when it is already collision-free; otherwise grows a
// rapidly-exploring random tree and shortcuts the extracted path. Throws
// NoPathError when the tree fails to connect within max_iters.
std::vector<Vec2> rrt_route(const WorldMap& map, const Vec2& start, const Vec2& goal,
                            RngStream& rng, const RrtParams& params = {});

}  // namespace slamsafe
