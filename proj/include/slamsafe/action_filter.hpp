#pragma once

#include <cstdint>
#include <vector>

#include "slamsafe/qlearn.hpp"

namespace slamsafe {

// Safety gate over a frozen Q-table.
struct FilterConfig {
    double threshold{-10.0};
    // Cells visited fewer times than this are treated as unsafe: an
    // unvisited cell still carries the initial value 0, which would
    // otherwise trivially pass any negative threshold.
    std::int64_t min_visits{3};
};

// Verdict on an already-discretized cell.
bool is_safe_cell(const QTable& q, const FilterConfig& cfg, const CellIndex& cell);

// Verdict on raw step features (safe iff Q[discretize(f)] >= threshold and
// the cell has been visited at least min_visits times).
bool is_safe(const QTable& q, const FilterConfig& cfg, const StateActionFeatures& f);

// One labeled observation for threshold selection: the cell a step landed
// in and whether tracking broke on that step.
struct LabeledCell {
    CellIndex cell;
    bool phi{false};
};

struct ConfusionCounts {
    std::int64_t fp{0};  // breakage classified safe
    std::int64_t fn{0};  // non-breakage classified unsafe
};

ConfusionCounts confusion_counts(const QTable& q, const std::vector<LabeledCell>& log,
                                 double threshold);

// Picks the operating threshold that lexicographically minimizes
// (false positives, false negatives) over all cut points between sorted
// observed Q values. A cut strictly between two observed values returns
// their midpoint; the all-unsafe cut returns max + 1. Throws
// DegenerateError unless both classes are present.
double choose_threshold(const QTable& q, const std::vector<LabeledCell>& log);

// Collapses raw per-step samples into one labeled observation per visited
// cell: a cell is labeled as breaking when at least min_count steps landed
// in it and the empirical breakage rate reaches rate_threshold. Cells seen
// fewer than min_count times are dropped (the visit guard already rejects
// them at run time).
std::vector<LabeledCell> aggregate_cell_labels(const std::vector<StepSample>& samples,
                                               std::int64_t min_count = 3,
                                               double rate_threshold = 0.15);

}  // namespace slamsafe
