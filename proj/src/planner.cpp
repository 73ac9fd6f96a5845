#include "slamsafe/planner.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "slamsafe/csv.hpp"
#include "slamsafe/errors.hpp"

namespace slamsafe {

namespace {

Vec2 unit_or(const Vec2& v, const Vec2& fallback) {
    const double n = norm(v);
    return n > 1e-12 ? v * (1.0 / n) : fallback;
}

// One turn-limited pursuit step toward `target`. Picks the direction whose
// required turn is smaller, clamps the turn to the proposal cap, and keeps
// the step length at step_dist except on the shortened final approach.
PlanStep pursuit_step(const WorldMap& map, const CameraModel& cam, const Pose& pose,
                      const Vec2& target, bool final_target, const PlannerConfig& cfg) {
    const Vec2 delta = target - pose.position();
    const double bearing = std::atan2(delta.y, delta.x);
    const double fwd_turn = wrap_angle(bearing - pose.theta);
    const double bwd_turn = wrap_angle(bearing + kPi - pose.theta);

    const Direction dir =
        std::abs(fwd_turn) <= std::abs(bwd_turn) ? Direction::forward : Direction::backward;
    const double want = dir == Direction::forward ? fwd_turn : bwd_turn;
    const double cap = deg_to_rad(kAngleTrainCapDeg);
    // Snap to the proposal-grid spacing: executed turns then fall in the
    // same discretized cells the table was trained on.
    const double grid = deg_to_rad(kProposalSpacingDeg);
    const double turn = grid * std::round(std::clamp(want, -cap, cap) / grid);

    double step_len = cfg.step_dist;
    if (final_target) {
        const double d = norm(delta);
        if (d < cfg.step_dist) step_len = std::max(cfg.min_step, d);
    }

    const double theta_new = pose.theta + turn;
    const double sign = dir == Direction::forward ? 1.0 : -1.0;
    const Vec2 to_pos = pose.position() + unit_from_angle(theta_new) * (sign * step_len);

    PlanStep step;
    step.from = pose;
    step.to = make_pose(to_pos.x, to_pos.y, theta_new);
    step.direction = dir;
    step.features = featurize(map, cam, step.from, step.to, dir);
    return step;
}

bool step_admissible(const WorldMap& map, const PlanStep& step) {
    if (!map.bounds.contains(step.to.position())) return false;
    return !sweep_collides(map, step.from.position(), step.to.position());
}

// Pursuit bookkeeping over the plan's waypoint list.
struct Pursuit {
    const Plan* plan{nullptr};
    std::size_t next{0};

    void reset(const Plan& p) {
        plan = &p;
        next = 0;
    }
    // Skips waypoints already within the advance radius (the last one is
    // always kept) and returns the current target.
    Vec2 target(const Pose& pose, double advance) {
        const auto& wps = plan->waypoints;
        while (next + 1 < wps.size() && dist(pose.position(), wps[next]) < advance) ++next;
        return wps[next];
    }
    bool final_target() const { return next + 1 == plan->waypoints.size(); }
};

class AlwaysSafePolicy final : public SafetyPolicy {
public:
    PolicyVerdict assess(const WorldMap&, const CameraModel&, const StepContext&) const override {
        return {true, 0.0};
    }
    std::string name() const override { return "naive"; }
};

std::optional<RecoveryCandidate> best_recovery(const WorldMap& map, const CameraModel& cam,
                                               const SafetyPolicy& policy, const Pose& pose,
                                               const Vec2& align_target,
                                               const PlannerConfig& cfg) {
    for (double dist_r : cfg.recovery_dists) {
        std::optional<RecoveryCandidate> best;
        for (const ActionCandidate& cand : proposal_grid(dist_r)) {
            const auto to = try_action(map, pose, cand);
            if (!to) continue;
            PlanStep step;
            step.from = pose;
            step.to = *to;
            step.direction = cand.dir;
            step.features = featurize(map, cam, pose, *to, cand.dir);
            const PolicyVerdict v = policy.assess(map, cam, {step.from, step.to, step.features});
            if (!v.safe) continue;
            const Vec2 delta = align_target - to->position();
            const double bearing = std::atan2(delta.y, delta.x);
            const double align = std::cos(to->theta - bearing);
            if (!best || align > best->alignment_score) {
                best = RecoveryCandidate{step, align, v};
            }
        }
        if (best) return best;
    }
    return std::nullopt;
}

RunResult run_policy_planner(const WorldMap& map, const CameraModel& cam,
                             const BreakageModel& oracle, const SafetyPolicy& policy,
                             const PlannerConfig& cfg, const Vec2& goal, std::uint64_t seed) {
    RngStream oracle_stream(seed, "run/oracle");
    RngStream route_rng(seed, "run/route");

    RunResult res;
    Pose pose = map.start;
    res.path.push_back(pose);

    Plan plan;
    Pursuit pursuit;
    bool needs_plan = true;
    int steps_since_replan = 0;
    int iterations = 0;

    auto execute = [&](const PlanStep& step, const PolicyVerdict& v, bool recovery) -> bool {
        const bool phi = breakage(oracle, step.features, oracle_stream);
        StepLogRow row;
        row.step_idx = res.steps;
        row.pose = step.to;
        row.direction = step.direction;
        row.dtheta_deg = step.features.dtheta_deg;
        row.overlap = step.features.overlap;
        row.q_value = v.score;
        row.safe_verdict = v.safe;
        row.recovery_flag = recovery;
        row.phi = phi;
        res.log.push_back(row);
        ++res.steps;
        ++steps_since_replan;
        pose = step.to;
        res.path.push_back(pose);
        return phi;
    };

    while (true) {
        if (dist(pose.position(), goal) <= cfg.goal_tolerance) {
            res.outcome = RunOutcome::success;
            break;
        }
        if (res.steps >= cfg.step_budget) {
            res.outcome = RunOutcome::timeout;
            break;
        }
        if (++iterations > cfg.max_iterations) {
            res.outcome = RunOutcome::timeout;
            break;
        }
        if (cfg.replan_every > 0 && steps_since_replan >= cfg.replan_every) needs_plan = true;
        if (needs_plan) {
            plan = plan_to_goal(map, cam, pose, goal, cfg, route_rng);
            pursuit.reset(plan);
            needs_plan = false;
            steps_since_replan = 0;
        }

        const Vec2 target = pursuit.target(pose, cfg.waypoint_advance);
        PlanStep step = pursuit_step(map, cam, pose, target, pursuit.final_target(), cfg);
        if (!step_admissible(map, step)) {
            needs_plan = true;
            continue;
        }

        const PolicyVerdict verdict = policy.assess(map, cam, {step.from, step.to, step.features});
        if (!verdict.safe) {
            const auto rec = best_recovery(map, cam, policy, pose, target, cfg);
            if (!rec) {
                throw StuckError("planner: no safe recovery candidate after " +
                                     std::to_string(cfg.recovery_dists.size()) + " rounds",
                                 res.steps, res.recoveries);
            }
            ++res.recoveries;
            if (execute(rec->step, rec->verdict, true)) {
                res.outcome = RunOutcome::breakage;
                break;
            }
            needs_plan = true;  // replan from the realized pose
            continue;
        }

        if (execute(step, verdict, false)) {
            res.outcome = RunOutcome::breakage;
            break;
        }
    }
    return res;
}

}  // namespace

Plan plan_to_goal(const WorldMap& map, const CameraModel& cam, const Pose& pose,
                  const Vec2& goal, const PlannerConfig& cfg, RngStream& route_rng) {
    const std::vector<Vec2> route = rrt_route(map, pose.position(), goal, route_rng, cfg.rrt);

    Plan plan;
    const std::size_t legs = route.size() - 1;
    std::vector<Vec2> chord_dir(legs);
    for (std::size_t i = 0; i < legs; ++i) {
        chord_dir[i] = unit_or(route[i + 1] - route[i], unit_from_angle(pose.theta));
    }

    Vec2 tangent_in = unit_from_angle(pose.theta);
    // A start heading pointing away from the route would loop the curve
    // backwards; fall back to the chord direction in that case.
    if (dot(tangent_in, chord_dir[0]) < 0.17) tangent_in = chord_dir[0];

    for (std::size_t i = 0; i < legs; ++i) {
        const Vec2 tangent_out =
            i + 1 < legs ? unit_or(chord_dir[i] + chord_dir[i + 1], chord_dir[i]) : chord_dir[i];

        // Shrink the tangent handles until the smoothed leg clears the
        // walls; handle 0 is the RRT chord itself, which is collision-free.
        TrajectorySegment seg;
        for (double handle : {cfg.curve_handle, cfg.curve_handle * 0.5, cfg.curve_handle * 0.25, 0.0}) {
            seg = make_segment(route[i], route[i + 1], tangent_in, tangent_out, handle);
            seg.sample_spacing = cfg.sample_spacing;
            bool clear = true;
            Vec2 prev = seg.control_points[0];
            for (int k = 1; k <= 64; ++k) {
                const Vec2 cur = bernstein_eval(seg, k / 64.0);
                if (sweep_collides(map, prev, cur) || !map.bounds.contains(cur)) {
                    clear = false;
                    break;
                }
                prev = cur;
            }
            if (clear) break;
        }
        plan.segments.push_back(seg);
        for (const Vec2& p : sample_arclength(seg, cfg.sample_spacing)) {
            plan.waypoints.push_back(p);
        }
        tangent_in = tangent_out;
    }

    // Predicted rollout: pure pursuit from the start pose, truncated at the
    // first inadmissible step.
    Pursuit pursuit;
    pursuit.reset(plan);
    Pose sim = pose;
    for (int i = 0; i < cfg.step_budget; ++i) {
        if (dist(sim.position(), goal) <= cfg.goal_tolerance) break;
        const Vec2 target = pursuit.target(sim, cfg.waypoint_advance);
        PlanStep step = pursuit_step(map, cam, sim, target, pursuit.final_target(), cfg);
        if (!step_admissible(map, step)) break;
        plan.steps.push_back(step);
        sim = step.to;
    }
    return plan;
}

const char* to_string(RunOutcome o) {
    switch (o) {
        case RunOutcome::success: return "success";
        case RunOutcome::breakage: return "breakage";
        case RunOutcome::timeout: return "timeout";
    }
    return "?";
}

RunResult run_safe_planner(const WorldMap& map, const CameraModel& cam,
                           const BreakageModel& oracle, const SafetyPolicy& policy,
                           const PlannerConfig& cfg, const Vec2& goal, std::uint64_t seed) {
    return run_policy_planner(map, cam, oracle, policy, cfg, goal, seed);
}

RunResult run_naive_planner(const WorldMap& map, const CameraModel& cam,
                            const BreakageModel& oracle, const PlannerConfig& cfg,
                            const Vec2& goal, std::uint64_t seed) {
    AlwaysSafePolicy naive;
    return run_policy_planner(map, cam, oracle, naive, cfg, goal, seed);
}

void save_step_log(const std::string& path, const std::vector<StepLogRow>& rows,
                   const std::vector<std::string>& provenance) {
    CsvWriter csv(path);
    for (const auto& line : provenance) csv.comment(line);
    csv.row({"step_idx", "x", "y", "theta", "direction", "dtheta_deg", "overlap", "q_value",
             "safe_verdict", "recovery_flag", "phi"});
    for (const auto& r : rows) {
        csv.row({std::to_string(r.step_idx), fmt_double(r.pose.x), fmt_double(r.pose.y),
                 fmt_double(r.pose.theta), to_string(r.direction), fmt_double(r.dtheta_deg),
                 std::to_string(r.overlap), fmt_double(r.q_value),
                 r.safe_verdict ? "1" : "0", r.recovery_flag ? "1" : "0", r.phi ? "1" : "0"});
    }
}

}  // namespace slamsafe
