#include "slamsafe/actions.hpp"


#include <algorithm>
#include <cmath>
namespace slamsafe {

const std::vector<double>& proposal_angles_deg() {
    static const std::vector<double> angles = [] {
        std::vector<double> out{0.0};
        for (double deg = kProposalSpacingDeg; deg <= kAngleTrainCapDeg + 1e-9;
             deg += kProposalSpacingDeg) {
            out.push_back(deg);
            out.push_back(-deg);
        }
        return out;
    }();
    return angles;
}

std::vector<ActionCandidate> proposal_grid(double dist) {
    std::vector<ActionCandidate> grid;
    grid.reserve(2 * proposal_angles_deg().size());
    for (Direction dir : {Direction::forward, Direction::backward}) {
        for (double deg : proposal_angles_deg()) {
            grid.push_back({dir, deg_to_rad(deg), dist});
        }
    }
    return grid;
}

std::optional<Pose> try_action(const WorldMap& map, const Pose& p, const ActionCandidate& c) {
    const double theta = wrap_angle(p.theta + c.dtheta_rad);
    const Vec2 h = unit_from_angle(theta);
    const double sign = c.dir == Direction::forward ? 1.0 : -1.0;
    const Vec2 from = p.position();
    const Vec2 to = from + h * (sign * c.dist);
    if (!map.bounds.contains(to)) return std::nullopt;
    if (sweep_collides(map, from, to)) return std::nullopt;
    return make_pose(to.x, to.y, theta);
}

std::vector<EvaluatedCandidate> evaluate_candidates(const WorldMap& map,
                                                    const CameraModel& cam,
                                                    const Pose& p, double dist) {
    // The base pose's visibility is shared by all candidate overlaps, which
    // matches featurize() exactly: both count V(p) members in index order.
    std::vector<int> scratch;
    std::vector<int> base;
    visible_indices(map, cam, p, scratch, base);

    std::vector<EvaluatedCandidate> out;
    for (const auto& cand : proposal_grid(dist)) {
        const auto to = try_action(map, p, cand);
        if (!to) continue;
        EvaluatedCandidate ec;
        ec.action = cand;
        ec.to = *to;
        ec.feats.eta = cand.dir;
        ec.feats.dtheta_deg =
            std::min(kAngleMaxDeg, std::abs(rad_to_deg(wrap_angle(to->theta - p.theta))));
        ec.feats.overlap = fov_overlap_from(map, cam, base, *to);
        ec.cell = discretize(ec.feats);
        out.push_back(ec);
    }
    return out;
}

}  // namespace slamsafe
