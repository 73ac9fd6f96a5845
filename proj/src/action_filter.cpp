#include "slamsafe/action_filter.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "slamsafe/errors.hpp"

namespace slamsafe {

bool is_safe_cell(const QTable& q, const FilterConfig& cfg, const CellIndex& cell) {
    if (q.visits(cell) < cfg.min_visits) return false;
    return q.value(cell) >= cfg.threshold;
}

bool is_safe(const QTable& q, const FilterConfig& cfg, const StateActionFeatures& f) {
    return is_safe_cell(q, cfg, discretize(f));
}

ConfusionCounts confusion_counts(const QTable& q, const std::vector<LabeledCell>& log,
                                 double threshold) {
    ConfusionCounts c;
    for (const auto& entry : log) {
        const bool safe = q.value(entry.cell) >= threshold;
        if (entry.phi && safe) ++c.fp;
        if (!entry.phi && !safe) ++c.fn;
    }
    return c;
}

double choose_threshold(const QTable& q, const std::vector<LabeledCell>& log) {
    bool saw_break = false;
    bool saw_clean = false;
    std::vector<std::pair<double, bool>> obs;  // (Q value, phi)
    obs.reserve(log.size());
    for (const auto& entry : log) {
        obs.emplace_back(q.value(entry.cell), entry.phi);
        (entry.phi ? saw_break : saw_clean) = true;
    }
    if (!saw_break || !saw_clean) {
        throw DegenerateError("choose_threshold: log must contain both classes");
    }

    std::sort(obs.begin(), obs.end());
    std::vector<double> distinct;
    distinct.reserve(obs.size());
    for (const auto& [v, phi] : obs) {
        if (distinct.empty() || v != distinct.back()) distinct.push_back(v);
    }
    const std::size_t m = distinct.size();

    // Cut j makes the j smallest distinct values unsafe and the rest safe.
    // FP(j) counts breakages above the cut, FN(j) clean samples at or below.
    std::int64_t best_fp = std::numeric_limits<std::int64_t>::max();
    std::int64_t best_fn = std::numeric_limits<std::int64_t>::max();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j <= m; ++j) {
        const double boundary = j == 0 ? -std::numeric_limits<double>::infinity()
                                       : distinct[j - 1];
        std::int64_t fp = 0;
        std::int64_t fn = 0;
        for (const auto& [v, phi] : obs) {
            if (phi && v > boundary) ++fp;
            if (!phi && v <= boundary) ++fn;
        }
        if (fp < best_fp || (fp == best_fp && fn < best_fn)) {
            best_fp = fp;
            best_fn = fn;
            best_j = j;
        }
    }

    if (best_j == m) return distinct.back() + 1.0;  // everything unsafe
    if (best_j == 0) return distinct.front();       // everything safe
    return 0.5 * (distinct[best_j - 1] + distinct[best_j]);
}

std::vector<LabeledCell> aggregate_cell_labels(const std::vector<StepSample>& samples,
                                               std::int64_t min_count,
                                               double rate_threshold) {
    std::array<std::int64_t, kCellCount> total{};
    std::array<std::int64_t, kCellCount> broken{};
    for (const auto& s : samples) {
        const int flat = discretize(s.feats).flat();
        ++total[flat];
        if (s.phi) ++broken[flat];
    }
    std::vector<LabeledCell> labels;
    for (int flat = 0; flat < kCellCount; ++flat) {
        if (total[flat] < min_count) continue;
        const double rate = static_cast<double>(broken[flat]) / static_cast<double>(total[flat]);
        labels.push_back({cell_from_flat(flat), rate >= rate_threshold});
    }
    return labels;
}

}  // namespace slamsafe
