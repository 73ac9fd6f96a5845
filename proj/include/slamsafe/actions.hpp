#pragma once

#include <optional>
#include <vector>

#include "slamsafe/features.hpp"

namespace slamsafe {

// One candidate maneuver: rotate by dtheta, then move dist along (forward)
// or against (backward) the new heading.
struct ActionCandidate {
    Direction dir{Direction::forward};
    double dtheta_rad{0.0};
    double dist{1.0};
};

// The proposal grid used by training, recovery, and free-roaming walks:
// both directions crossed with dtheta in {0, ±4.5, ±9, ±13.5, ±18, ±22.5,
// ±27} degrees. Heading change never exceeds the 27-degree training cap.
// Pursuit turns snap to the same spacing so executed steps land in cells
// the table has actually visited.
inline constexpr double kProposalSpacingDeg = 4.5;
const std::vector<double>& proposal_angles_deg();
std::vector<ActionCandidate> proposal_grid(double dist = 1.0);

// Resulting pose if the candidate is admissible from p (collision-free
// sweep, end pose inside bounds), nullopt otherwise.
std::optional<Pose> try_action(const WorldMap& map, const Pose& p, const ActionCandidate& c);

struct EvaluatedCandidate {
    ActionCandidate action;
    Pose to;
    StateActionFeatures feats;
    CellIndex cell;
};

// All admissible candidates from p with their features and table cells.
// Order matches proposal_grid, which makes downstream tie-breaking stable.
std::vector<EvaluatedCandidate> evaluate_candidates(const WorldMap& map,
                                                    const CameraModel& cam,
                                                    const Pose& p, double dist = 1.0);

}  // namespace slamsafe
