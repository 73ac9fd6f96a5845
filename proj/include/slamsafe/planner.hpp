#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slamsafe/actions.hpp"
#include "slamsafe/rng.hpp"
#include "slamsafe/rrt.hpp"
#include "slamsafe/slam_oracle.hpp"
#include "slamsafe/trajectory.hpp"

namespace slamsafe {

// One planned motion: rotate to the new heading, then translate one step
// along (forward) or against (backward) it. Heading change is capped at 27
// degrees by construction.
struct PlanStep {
    Pose from;
    Pose to;
    Direction direction{Direction::forward};
    StateActionFeatures features;
};

struct PlannerConfig {
    double goal_tolerance{0.5};
    int step_budget{400};
    double sample_spacing{1.0};  // waypoint spacing along the curve
    double step_dist{1.0};       // executed step length
    double min_step{0.5};        // shortened final approach never goes below this
    // Recovery rounds: each round re-enumerates the proposal grid at the
    // next step length; a round with zero safe admissible candidates counts
    // as one failed attempt.
    std::vector<double> recovery_dists{1.0, 0.75, 1.25, 0.6, 1.4};
    double waypoint_advance{0.5};  // waypoints closer than this are considered passed
    int replan_every{0};           // extra periodic replanning; 0 = only after recovery
    int max_iterations{1600};      // loop guard covering non-executing iterations
    double curve_handle{0.2};      // tangent handle fraction for segment shaping
    RrtParams rrt;
};

// A route smoothed into quintic segments, its ~1 m waypoint samples, and
// the predicted pursuit rollout (truncated at the first collision).
struct Plan {
    std::vector<TrajectorySegment> segments;
    std::vector<Vec2> waypoints;
    std::vector<PlanStep> steps;
};

Plan plan_to_goal(const WorldMap& map, const CameraModel& cam, const Pose& pose,
                  const Vec2& goal, const PlannerConfig& cfg, RngStream& route_rng);

// Uniform safety interface the planner consults before each step. Score is
// policy-specific (Q value, margin, overlap count, or view quality).
struct PolicyVerdict {
    bool safe{true};
    double score{0.0};
};

struct StepContext {
    Pose from;
    Pose to;
    StateActionFeatures feats;
};

class SafetyPolicy {
public:
    virtual ~SafetyPolicy() = default;
    virtual PolicyVerdict assess(const WorldMap& map, const CameraModel& cam,
                                 const StepContext& ctx) const = 0;
    virtual std::string name() const = 0;
};

struct RecoveryCandidate {
    PlanStep step;
    double alignment_score{0.0};  // cosine between post-step heading and bearing to target
    PolicyVerdict verdict;
};

enum class RunOutcome { success, breakage, timeout };
const char* to_string(RunOutcome o);

struct StepLogRow {
    int step_idx{0};
    Pose pose;  // realized post-step pose
    Direction direction{Direction::forward};
    double dtheta_deg{0.0};
    int overlap{0};
    double q_value{0.0};
    bool safe_verdict{true};
    bool recovery_flag{false};
    bool phi{false};
};

struct RunResult {
    RunOutcome outcome{RunOutcome::timeout};
    int steps{0};
    int recoveries{0};
    std::vector<StepLogRow> log;
    std::vector<Pose> path;  // start pose plus every realized pose
};

// Gated execution loop: follow the planned steps, gate each one through the
// policy, fall back to the best-aligned safe recovery candidate when the
// gate rejects, and replan from the realized pose afterwards. Terminates on
// goal proximity, oracle breakage, or the step budget. Throws StuckError
// after `recovery_dists.size()` consecutive recovery rounds find no safe
// admissible candidate; NoPathError propagates from route planning.
RunResult run_safe_planner(const WorldMap& map, const CameraModel& cam,
                           const BreakageModel& oracle, const SafetyPolicy& policy,
                           const PlannerConfig& cfg, const Vec2& goal, std::uint64_t seed);

// Same loop with the gate disabled: every planned step executes. Never
// throws StuckError.
RunResult run_naive_planner(const WorldMap& map, const CameraModel& cam,
                            const BreakageModel& oracle, const PlannerConfig& cfg,
                            const Vec2& goal, std::uint64_t seed);

// Step log CSV with fixed column order; provenance lines are written as
// '#' comments above the header.
void save_step_log(const std::string& path, const std::vector<StepLogRow>& rows,
                   const std::vector<std::string>& provenance = {});

}  // namespace slamsafe
