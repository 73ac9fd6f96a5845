#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <vector>

#include "slamsafe/action_filter.hpp"
#include "slamsafe/errors.hpp"

using namespace slamsafe;

namespace {

// Brute-force lexicographic (FP, FN) optimum over all candidate cut points:
// every observed Q value as a ">= threshold" boundary, plus one above the
// maximum. Returns the best achievable (FP, FN) pair.
std::pair<std::int64_t, std::int64_t> brute_best(const QTable& q,
                                                 const std::vector<LabeledCell>& log) {
    std::vector<double> candidates;
    for (const auto& lc : log) candidates.push_back(q.value(lc.cell));
    std::sort(candidates.begin(), candidates.end());
    candidates.push_back(candidates.back() + 1.0);

    std::pair<std::int64_t, std::int64_t> best{INT64_MAX, INT64_MAX};
    for (double t : candidates) {
        std::int64_t fp = 0, fn = 0;
        for (const auto& lc : log) {
            const bool safe = q.value(lc.cell) >= t;
            if (lc.phi && safe) ++fp;
            if (!lc.phi && !safe) ++fn;
        }
        best = std::min(best, std::make_pair(fp, fn));
    }
    return best;
}

QTable table_with(const std::vector<double>& values) {
    QTable q;
    for (std::size_t i = 0; i < values.size(); ++i)
        q.set_raw(static_cast<int>(i), values[i], 10);
    return q;
}

} // namespace

TEST_CASE("is_safe thresholds the cell value") {
    QTable q;
    const CellIndex cell{0, 2, 3};
    const FilterConfig cfg;  // threshold -10, min_visits 3

    q.set_raw(cell.flat(), -9.5, 10);
    CHECK(is_safe_cell(q, cfg, cell));
    q.set_raw(cell.flat(), -10.0, 10);
    CHECK(is_safe_cell(q, cfg, cell));  // boundary counts as safe
    q.set_raw(cell.flat(), -12.3, 10);
    CHECK_FALSE(is_safe_cell(q, cfg, cell));
}

TEST_CASE("unvisited cells are unsafe despite their zero value") {
    QTable q;
    const FilterConfig cfg;
    const CellIndex cell{1, 4, 4};
    CHECK_FALSE(is_safe_cell(q, cfg, cell));  // 0 visits
    q.set_raw(cell.flat(), -1.0, 2);
    CHECK_FALSE(is_safe_cell(q, cfg, cell));  // below the visit guard
    q.set_raw(cell.flat(), -1.0, 3);
    CHECK(is_safe_cell(q, cfg, cell));
}

TEST_CASE("raising the threshold never flips unsafe to safe") {
    QTable q;
    RngStream rng(21, "test/filter/mono");
    std::vector<CellIndex> cells;
    for (int i = 0; i < 100; ++i) {
        const CellIndex c = cell_from_flat(static_cast<int>(rng.bounded(kCellCount)));
        q.set_raw(c.flat(), -rng.uniform(0.0, 25.0), 5);
        cells.push_back(c);
    }
    FilterConfig low, high;
    low.threshold = -15.0;
    high.threshold = -8.0;
    for (const auto& c : cells)
        if (is_safe_cell(q, high, c)) CHECK(is_safe_cell(q, low, c));
}

TEST_CASE("choose_threshold on a separable log returns the midpoint") {
    const QTable q = table_with({-18.0, -16.0, -4.0, -2.0});
    const std::vector<LabeledCell> log{{cell_from_flat(0), true},
                                       {cell_from_flat(1), true},
                                       {cell_from_flat(2), false},
                                       {cell_from_flat(3), false}};
    const double t = choose_threshold(q, log);
    CHECK(t == doctest::Approx(-10.0).epsilon(1e-12));
    const ConfusionCounts cc = confusion_counts(q, log, t);
    CHECK(cc.fp == 0);
    CHECK(cc.fn == 0);
}

TEST_CASE("choose_threshold matches the exhaustive scan on noisy logs") {
    RngStream rng(5150, "test/filter/scan");
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 3 + static_cast<int>(rng.bounded(12));
        std::vector<double> values;
        std::vector<LabeledCell> log;
        bool has_true = false, has_false = false;
        QTable q;
        for (int i = 0; i < n; ++i) {
            const double v = -std::floor(rng.uniform(0.0, 8.0)) * 2.5;  // ties likely
            const bool phi = rng.bounded(2) == 0;
            q.set_raw(i, v, 10);
            log.push_back({cell_from_flat(i), phi});
            has_true |= phi;
            has_false |= !phi;
        }
        if (!has_true || !has_false) continue;
        const double t = choose_threshold(q, log);
        const auto best = brute_best(q, log);
        const ConfusionCounts cc = confusion_counts(q, log, t);
        CHECK(cc.fp == best.first);
        CHECK(cc.fn == best.second);
    }
}

TEST_CASE("choose_threshold rejects single-class logs") {
    const QTable q = table_with({-5.0, -6.0});
    CHECK_THROWS_AS(
        choose_threshold(q, {{cell_from_flat(0), false}, {cell_from_flat(1), false}}),
        DegenerateError);
    CHECK_THROWS_AS(choose_threshold(q, {}), DegenerateError);
}

TEST_CASE("aggregate_cell_labels applies count and rate rules") {
    std::vector<StepSample> samples;
    const StateActionFeatures a{Direction::forward, 3.0, 450};   // cell A: 4 visits, 1 break
    const StateActionFeatures b{Direction::forward, 24.0, 60};   // cell B: 2 visits (dropped)
    const StateActionFeatures c{Direction::backward, 9.0, 300};  // cell C: 5 visits, 0 breaks
    for (int i = 0; i < 4; ++i) samples.push_back({0, i, a, i == 0});
    for (int i = 0; i < 2; ++i) samples.push_back({0, i, b, true});
    for (int i = 0; i < 5; ++i) samples.push_back({0, i, c, false});

    const auto labels = aggregate_cell_labels(samples, 3, 0.15);
    REQUIRE(labels.size() == 2);
    bool saw_a = false, saw_c = false;
    for (const auto& lc : labels) {
        if (lc.cell == discretize(a)) {
            CHECK(lc.phi);  // rate 0.25 >= 0.15
            saw_a = true;
        }
        if (lc.cell == discretize(c)) {
            CHECK_FALSE(lc.phi);
            saw_c = true;
        }
    }
    CHECK(saw_a);
    CHECK(saw_c);
}
