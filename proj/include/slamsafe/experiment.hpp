#pragma once

// Experiment orchestration: the goal-based trial matrix, the free-roaming
// steps-to-breakage comparison, and the merge/export step that produces
// plot-data CSVs. All randomness flows from one base seed through named
// streams, so every output file is byte-stable across reruns.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "slamsafe/planner.hpp"
#include "slamsafe/policy.hpp"
#include "slamsafe/qlearn.hpp"

namespace slamsafe {

// Paths to trained artifacts; consulted lazily, so a missing file only
// matters when a policy actually needs it.
struct PolicyArtifacts {
    std::string qtable_file;
    std::string svm_file;
};

// Loaded policy plus whatever storage keeps it alive.
std::unique_ptr<SafetyPolicy> make_policy(const std::string& name,
                                          const PolicyArtifacts& artifacts);

// The known policy names, in canonical report order.
const std::vector<std::string>& known_policies();

// Declarative description of a goal-based evaluation run.
// JSON schema (version 1):
// {
//   "schema": "experiment", "version": 1,
//   "maps": ["path.json", ...],
//   "policies": ["naive", "rl", ...],
//   "trials_per_cell": 10,
//   "seed": 42,
//   "oracle": {"low": 0.02, "high": 0.5, "ratio": 2.0},
//   "qtable": "qtable.json",   // optional unless "rl" is listed
//   "svm": "svm.json",         // optional unless "svm" is listed
//   "out_dir": "runs/exp1"
// }
struct ExperimentConfig {
    std::vector<std::string> map_files;
    std::vector<std::string> policies;
    int trials_per_cell{10};
    std::uint64_t seed{0};
    double oracle_low{kDefaultOracleLow};
    double oracle_high{kDefaultOracleHigh};
    double oracle_ratio{2.0};
    PolicyArtifacts artifacts;
    std::string out_dir{"."};
};

ExperimentConfig load_experiment_config(const std::string& path);

// One trial of the matrix. outcome is one of success | breakage | stuck |
// timeout; success means (and only means) goal proximity was reached.
struct ResultRow {
    std::string map_id;
    std::string policy;
    int trial{0};
    std::string outcome;
    int steps{0};
    int recoveries{0};
    std::uint64_t seed{0};
};

// Per-trial seed: a hash chain over (base, map id, policy, trial), so
// adding maps, policies, or trials never perturbs existing draws.
std::uint64_t trial_seed(std::uint64_t base, const std::string& map_id,
                         const std::string& policy, int trial);

// Runs the full maps x policies x trials matrix in deterministic
// (map, policy, trial) order. Planner exceptions become outcomes: a failed
// recovery is "stuck" (with the steps walked so far), an unreachable goal
// route likewise counts against the policy as "stuck".
std::vector<ResultRow> run_goal_trials(const std::vector<WorldMap>& maps,
                                       const CameraModel& cam,
                                       const BreakageModel& oracle,
                                       const std::vector<std::string>& policies,
                                       const PolicyArtifacts& artifacts, int trials,
                                       std::uint64_t base_seed, const PlannerConfig& pcfg);

// Success-percentage aggregation per (map, policy), in first-seen order.
struct SummaryRow {
    std::string map_id;
    std::string policy;
    int trials{0};
    int successes{0};
    int breakages{0};
    int stucks{0};
    int timeouts{0};
    double success_pct{0.0};
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

void save_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> load_results_csv(const std::string& path);
void save_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);

// Free-roaming steps-to-breakage comparison: a policy-filtered random walk
// per episode (uniform over safe candidates, falling back to uniform over
// all admissible moves when the policy rejects everything), stopped at
// breakage or the step cap.
struct BreakageEvalConfig {
    std::vector<std::string> policies;
    int episodes{50};
    int step_cap{400};
    double step_dist{1.0};
    std::uint64_t seed{0};
    PolicyArtifacts artifacts;
};

struct BreakageRow {
    std::string policy;
    int episodes{0};
    double mean_steps{0.0};
    double stderr_steps{0.0};
};

std::vector<BreakageRow> eval_breakage(const std::vector<WorldMap>& maps,
                                       const CameraModel& cam, const BreakageModel& oracle,
                                       const BreakageEvalConfig& cfg);

// Episode lengths for a single policy (the raw data behind one bar).
std::vector<double> breakage_episode_lengths(const std::vector<WorldMap>& maps,
                                             const CameraModel& cam,
                                             const BreakageModel& oracle,
                                             const SafetyPolicy& policy,
                                             const BreakageEvalConfig& cfg);

void save_breakage_csv(const std::string& path, const std::vector<BreakageRow>& rows);

// Merges the recognized CSVs found in the input run directories
// (results.csv, breakage.csv, train_log.csv, samples.csv) and writes the
// plot-data files into out_dir:
//   table2_success.csv       map,policy,trials,successes,breakages,stucks,timeouts,success_pct
//   fig6_bars.csv            policy,episodes,mean_steps,stderr_steps
//   fig7_episode_length.csv  episode,steps
//   fig3_overlap.csv         bin,attempts,breakages,frequency
//   fig3_angle.csv           bin,attempts,breakages,frequency
// Outputs whose inputs are absent everywhere are skipped.
void compare_runs(const std::vector<std::string>& in_dirs, const std::string& out_dir);

}  // namespace slamsafe
