#pragma once

#include "slamsafe/world.hpp"

namespace slamsafe {

// The state-action parametrization: direction of motion, absolute heading
// change in degrees (clamped to 30), and the co-visible mapped-point count
// between the two poses (capped at 600).
struct StateActionFeatures {
    Direction eta{Direction::forward};
    double dtheta_deg{0.0};  // in [0, 30]
    int overlap{0};          // in [0, 600]
};

inline constexpr double kAngleMaxDeg = 30.0;
inline constexpr double kAngleTrainCapDeg = 27.0;  // proposal-time cap
inline constexpr int kAngleBins = 20;
inline constexpr int kOverlapBins = 20;
inline constexpr int kCellCount = 2 * kAngleBins * kOverlapBins;  // 800

// One of the 800 lookup-table cells. Values on an interior bin edge belong
// to the higher bin; 30 deg and overlap 600 clamp into bins 19.
struct CellIndex {
    int eta_bin{0};      // 0 forward, 1 backward
    int angle_bin{0};    // 0..19, width 1.5 deg
    int overlap_bin{0};  // 0..19, width 30 points

    int flat() const { return eta_bin * (kAngleBins * kOverlapBins) + angle_bin * kOverlapBins + overlap_bin; }
    bool operator==(const CellIndex& o) const = default;
};

CellIndex cell_from_flat(int flat);

StateActionFeatures featurize(const WorldMap& map, const CameraModel& cam,
                              const Pose& p_from, const Pose& p_to, Direction direction);

CellIndex discretize(const StateActionFeatures& f);

}  // namespace slamsafe
