#include "slamsafe/rrt.hpp"

#include <algorithm>
#include <cmath>

#include "slamsafe/errors.hpp"

namespace slamsafe {

namespace {

struct Node {
    Vec2 pos;
    int parent;
};

// Greedy shortcutting: from each kept vertex, jump to the furthest later
// vertex reachable by a collision-free straight segment.
std::vector<Vec2> shortcut(const WorldMap& map, const std::vector<Vec2>& path) {
    std::vector<Vec2> out;
    out.push_back(path.front());
    std::size_t i = 0;
    while (i + 1 < path.size()) {
        std::size_t best = i + 1;
        for (std::size_t j = path.size() - 1; j > i + 1; --j) {
            if (!sweep_collides(map, path[i], path[j])) {
                best = j;
                break;
            }
        }
        out.push_back(path[best]);
        i = best;
    }
    return out;
}

}  // namespace

std::vector<Vec2> rrt_route(const WorldMap& map, const Vec2& start, const Vec2& goal,
                            RngStream& rng, const RrtParams& params) {
    if (!map.bounds.contains(goal)) {
        throw NoPathError("rrt_route: goal lies outside the map bounds");
    }
    if (!sweep_collides(map, start, goal)) {
        return {start, goal};
    }

    std::vector<Node> nodes;
    nodes.push_back({start, -1});

    for (int iter = 0; iter < params.max_iters; ++iter) {
        Vec2 sample;
        if (rng.next_double() < params.goal_bias) {
            sample = goal;
        } else {
            sample.x = rng.uniform(map.bounds.xmin, map.bounds.xmax);
            sample.y = rng.uniform(map.bounds.ymin, map.bounds.ymax);
        }

        int nearest = 0;
        double best_d2 = norm2(nodes[0].pos - sample);
        for (int i = 1; i < static_cast<int>(nodes.size()); ++i) {
            const double d2 = norm2(nodes[i].pos - sample);
            if (d2 < best_d2) {
                best_d2 = d2;
                nearest = i;
            }
        }

        const double d = std::sqrt(best_d2);
        if (d < 1e-12) continue;
        const Vec2 dir = (sample - nodes[nearest].pos) * (1.0 / d);
        const Vec2 next = nodes[nearest].pos + dir * std::min(params.step, d);
        if (!map.bounds.contains(next)) continue;
        if (sweep_collides(map, nodes[nearest].pos, next)) continue;

        nodes.push_back({next, nearest});

        if (dist(next, goal) <= params.goal_radius && !sweep_collides(map, next, goal)) {
            std::vector<Vec2> path;
            path.push_back(goal);
            for (int i = static_cast<int>(nodes.size()) - 1; i != -1; i = nodes[i].parent) {
                path.push_back(nodes[i].pos);
            }
            std::reverse(path.begin(), path.end());
            return shortcut(map, path);
        }
    }
    throw NoPathError("rrt_route: no collision-free route found within the iteration cap");
}

}  // namespace slamsafe
