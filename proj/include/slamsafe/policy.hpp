#pragma once

#include <string>

#include "slamsafe/action_filter.hpp"
#include "slamsafe/nbv.hpp"
#include "slamsafe/planner.hpp"
#include "slamsafe/svm.hpp"

namespace slamsafe {

// Overlap-count heuristic: a step is safe while enough mapped points stay
// co-visible.
bool overlap_only_safe(const StateActionFeatures& f, int cutoff);

// Everything passes; the planner's gate and recovery never fire.
class NaivePolicy final : public SafetyPolicy {
public:
    PolicyVerdict assess(const WorldMap&, const CameraModel&, const StepContext&) const override {
        return {true, 0.0};
    }
    std::string name() const override { return "naive"; }
};

// Learned action filter: thresholded Q value plus the visit-count guard.
class RlPolicy final : public SafetyPolicy {
public:
    RlPolicy(QTable table, FilterConfig cfg) : table_(std::move(table)), cfg_(cfg) {}
    PolicyVerdict assess(const WorldMap&, const CameraModel&,
                         const StepContext& ctx) const override {
        const CellIndex cell = discretize(ctx.feats);
        return {is_safe_cell(table_, cfg_, cell), table_.value(cell)};
    }
    std::string name() const override { return "rl"; }
    const QTable& table() const { return table_; }
    const FilterConfig& config() const { return cfg_; }

private:
    QTable table_;
    FilterConfig cfg_;
};

// Supervised baseline: margin sign decides, margin value scores.
class SvmPolicy final : public SafetyPolicy {
public:
    explicit SvmPolicy(KernelClassifier clf) : clf_(std::move(clf)) {}
    PolicyVerdict assess(const WorldMap&, const CameraModel&,
                         const StepContext& ctx) const override {
        const double margin = svm_margin(clf_, ctx.feats);
        return {margin >= 0.0, margin};
    }
    std::string name() const override { return "svm"; }

private:
    KernelClassifier clf_;
};

class OverlapPolicy final : public SafetyPolicy {
public:
    explicit OverlapPolicy(int cutoff = 150) : cutoff_(cutoff) {}
    PolicyVerdict assess(const WorldMap&, const CameraModel&,
                         const StepContext& ctx) const override {
        return {overlap_only_safe(ctx.feats, cutoff_), static_cast<double>(ctx.feats.overlap)};
    }
    std::string name() const override { return "overlap"; }

private:
    int cutoff_;
};

// Next-best-view baseline: localization quality of the landing pose.
class NbvPolicy final : public SafetyPolicy {
public:
    explicit NbvPolicy(NBVQualityModel model = {}, double q_min = 0.2)
        : model_(model), q_min_(q_min) {}
    PolicyVerdict assess(const WorldMap& map, const CameraModel& cam,
                         const StepContext& ctx) const override {
        const double q = nbv_quality(map, cam, model_, ctx.from, ctx.to);
        return {q >= q_min_, q};
    }
    std::string name() const override { return "nbv"; }

private:
    NBVQualityModel model_;
    double q_min_;
};

}  // namespace slamsafe
