#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slamsafe/actions.hpp"
#include "slamsafe/slam_oracle.hpp"

namespace slamsafe {

// Reward weights: overlap bonus, heading-change penalty, breakage penalty,
// constant offset. With the default normalization (overlap scaled into
// [0,1]) every achievable reward lies in [-22.7, -9.833].
struct RewardWeights {
    double w1{0.167};
    double w2{-0.1};
    double w3{-10.0};
    double w0{-10.0};
    // Raw-count variant (w1 * overlap) kept for ablation.
    bool normalize_overlap{true};
};

double reward(const RewardWeights& w, const StateActionFeatures& f, bool phi);

struct QHyperparams {
    double alpha{0.2};
    double gamma{0.3};
};

class QTable {
public:
    explicit QTable(QHyperparams hp = {}) : hp_(hp) {}

    double value(const CellIndex& c) const { return values_[c.flat()]; }
    std::int64_t visits(const CellIndex& c) const { return visits_[c.flat()]; }
    const QHyperparams& hyperparams() const { return hp_; }

    // One temporal-difference update. The bootstrap M is the max value over
    // next_cells; an empty span means the episode terminated there (M = 0).
    // Returns the new value.
    double update(const CellIndex& cell, double r, std::span<const CellIndex> next_cells);

    void set_raw(int flat, double value, std::int64_t visits) {
        values_[flat] = value;
        visits_[flat] = visits;
    }
    std::span<const double> raw_values() const { return values_; }
    std::span<const std::int64_t> raw_visits() const { return visits_; }

private:
    QHyperparams hp_;
    std::array<double, kCellCount> values_{};
    std::array<std::int64_t, kCellCount> visits_{};
};

// Exploitation probability schedule: epsilon is the probability of taking
// the argmax-Q action. Note this is inverted relative to the common
// epsilon-greedy convention — here epsilon ramps up, exploiting more as
// training progresses.
struct EpsilonSchedule {
    double initial{0.0};
    double increment{0.05};
    int block_size{20};
    double ceiling{0.9};

    double at(std::int64_t episode) const;
};

enum class TerminalReason { breakage, step_cap, stuck, budget };
const char* to_string(TerminalReason r);

struct EpisodeLog {
    std::int64_t episode{0};
    int steps{0};
    double epsilon{0.0};
    TerminalReason reason{TerminalReason::breakage};
};

// One executed training step, kept for the binned breakage-rate plots, the
// supervised baseline, and threshold selection.
struct StepSample {
    std::int64_t episode{0};
    int step{0};
    StateActionFeatures feats;
    bool phi{false};
};

struct TrainConfig {
    RewardWeights weights;
    QHyperparams hyperparams;
    EpsilonSchedule schedule;
    std::int64_t steps_budget{0};
    int episode_step_cap{500};
    double step_dist{1.0};
    std::uint64_t seed{0};
};

struct TrainResult {
    QTable table;
    std::vector<EpisodeLog> episodes;
    std::vector<StepSample> samples;
};

// Episodic training over the map set (maps are cycled
// round-robin per episode). Each step picks the argmax-Q admissible
// candidate with probability epsilon, a uniform random one otherwise,
// executes it, draws the breakage flag, and applies one update. Episodes
// end on breakage, the step cap, or a dead-end pose.
TrainResult train(const std::vector<WorldMap>& maps, const CameraModel& cam,
                  const BreakageModel& oracle, const TrainConfig& cfg);

// Provenance stored alongside the table; load restores it bit-exactly.
struct QTableMeta {
    RewardWeights weights;
    EpsilonSchedule schedule;
    BreakageModel oracle;
    std::uint64_t seed{0};
    std::int64_t steps{0};
    double threshold{-10.0};      // operating filter threshold chosen after training
    std::int64_t min_visits{3};   // visit floor below which a cell is distrusted
};

void save_qtable(const std::string& path, const QTable& table, const QTableMeta& meta);
struct LoadedQTable {
    QTable table;
    QTableMeta meta;
};
LoadedQTable load_qtable(const std::string& path);

void save_train_log(const std::string& path, const std::vector<EpisodeLog>& log);
void save_samples(const std::string& path, const std::vector<StepSample>& samples);
std::vector<StepSample> load_samples(const std::string& path);

}  // namespace slamsafe
