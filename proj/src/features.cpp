#include "slamsafe/features.hpp"

#include <algorithm>
#include <cmath>

namespace slamsafe {

CellIndex cell_from_flat(int flat) {
    CellIndex c;
    c.eta_bin = flat / (kAngleBins * kOverlapBins);
    c.angle_bin = (flat / kOverlapBins) % kAngleBins;
    c.overlap_bin = flat % kOverlapBins;
    return c;
}

StateActionFeatures featurize(const WorldMap& map, const CameraModel& cam,
                              const Pose& p_from, const Pose& p_to, Direction direction) {
    StateActionFeatures f;
    f.eta = direction;
    f.dtheta_deg = std::min(kAngleMaxDeg, std::abs(rad_to_deg(wrap_angle(p_to.theta - p_from.theta))));
    f.overlap = fov_overlap(map, cam, p_from, p_to);
    return f;
}

CellIndex discretize(const StateActionFeatures& f) {
    CellIndex c;
    c.eta_bin = f.eta == Direction::forward ? 0 : 1;
    c.angle_bin = std::min(kAngleBins - 1, static_cast<int>(std::floor(f.dtheta_deg / 1.5)));
    c.overlap_bin = std::min(kOverlapBins - 1, f.overlap / 30);
    return c;
}

}  // namespace slamsafe
