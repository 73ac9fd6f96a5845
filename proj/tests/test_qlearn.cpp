#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "slamsafe/csv.hpp"
#include "slamsafe/errors.hpp"
#include "slamsafe/mapgen.hpp"
#include "slamsafe/qlearn.hpp"

using namespace slamsafe;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const char* name) { return fs::temp_directory_path() / name; }

} // namespace

TEST_CASE("reward substitutions") {
    const RewardWeights w;
    CHECK(reward(w, {Direction::forward, 0.0, 600}, false) ==
          doctest::Approx(-9.833).epsilon(1e-12));
    CHECK(reward(w, {Direction::forward, 27.0, 0}, true) ==
          doctest::Approx(-22.7).epsilon(1e-12));
    CHECK(reward(w, {Direction::forward, 10.0, 300}, false) ==
          doctest::Approx(-10.9165).epsilon(1e-12));
}

TEST_CASE("reward raw-count variant") {
    RewardWeights w;
    w.normalize_overlap = false;
    CHECK(reward(w, {Direction::forward, 0.0, 600}, false) ==
          doctest::Approx(0.167 * 600 - 10.0).epsilon(1e-12));
}

TEST_CASE("q_update follows the temporal-difference rule") {
    QTable q({0.2, 0.9});
    const CellIndex cell{0, 3, 4};
    const CellIndex next{0, 0, 19};
    q.set_raw(next.flat(), -9.833, 1);

    const CellIndex cands[] = {next};
    const double v = q.update(cell, -10.9165, cands);
    const double expected = 0.0 + 0.2 * (-10.9165 + 0.9 * -9.833 - 0.0);
    CHECK(v == doctest::Approx(expected).epsilon(1e-12));
    CHECK(v == doctest::Approx(-3.95324).epsilon(1e-9));
    CHECK(q.value(cell) == v);
    CHECK(q.visits(cell) == 1);

    // Zero learning rate never moves a value.
    QTable frozen({0.0, 0.9});
    frozen.update(cell, -22.7, cands);
    CHECK(frozen.value(cell) == 0.0);

    // Terminal update bootstraps from zero.
    QTable term({0.5, 0.9});
    const double tv = term.update(cell, -22.7, {});
    CHECK(tv == doctest::Approx(-11.35).epsilon(1e-12));
}

TEST_CASE("q_update converges to a constant-reward fixed point") {
    QTable q({0.2, 0.3});
    const CellIndex cell{1, 5, 5};
    for (int i = 0; i < 200; ++i) q.update(cell, -12.5, {});
    CHECK(q.value(cell) == doctest::Approx(-12.5).epsilon(1e-9));
    CHECK(q.visits(cell) == 200);
}

TEST_CASE("epsilon schedule ramps to its ceiling") {
    const EpsilonSchedule s;
    CHECK(s.at(0) == 0.0);
    CHECK(s.at(19) == 0.0);
    CHECK(s.at(20) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(s.at(359) == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(s.at(360) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(s.at(100000) == doctest::Approx(0.9).epsilon(1e-12));
    double prev = -1.0;
    for (int e = 0; e < 1000; e += 7) {
        const double eps = s.at(e);
        CHECK(eps >= prev);
        CHECK(eps <= 0.9 + 1e-12);
        prev = eps;
    }
}

TEST_CASE("train with zero budget returns an untouched table") {
    const std::vector<WorldMap> maps{generate_map(5, MapStyle::room)};
    const CameraModel cam;
    const BreakageModel oracle = calibrate(0.02, 0.5);
    TrainConfig cfg;
    cfg.steps_budget = 0;
    const TrainResult res = train(maps, cam, oracle, cfg);
    CHECK(res.episodes.empty());
    CHECK(res.samples.empty());
    for (double v : res.table.raw_values()) CHECK(v == 0.0);
}

TEST_CASE("train is deterministic and bounded") {
    TextureProfile sparse;
    sparse.rich_density = 10.0;
    const std::vector<WorldMap> maps{generate_map(5, MapStyle::corner, sparse)};
    const CameraModel cam;
    const BreakageModel oracle = calibrate(0.02, 0.5);
    TrainConfig cfg;
    cfg.steps_budget = 600;
    cfg.seed = 31;

    const TrainResult a = train(maps, cam, oracle, cfg);
    const TrainResult b = train(maps, cam, oracle, cfg);
    REQUIRE(a.episodes.size() == b.episodes.size());
    for (std::size_t i = 0; i < 800; ++i) {
        CHECK(a.table.raw_values()[i] == b.table.raw_values()[i]);
        CHECK(a.table.raw_visits()[i] == b.table.raw_visits()[i]);
    }

    // Sample log length equals total executed steps.
    std::int64_t steps = 0;
    for (const auto& ep : a.episodes) steps += ep.steps;
    CHECK(static_cast<std::int64_t>(a.samples.size()) == steps);
    CHECK(steps <= cfg.steps_budget);

    // Boundedness with the default weights: R_min/(1 - gamma) <= Q <= 0.
    const double r_min = reward(cfg.weights, {Direction::forward, 27.0, 0}, true);
    const double lo = r_min / (1.0 - cfg.hyperparams.gamma);
    for (double v : a.table.raw_values()) {
        CHECK(v <= 0.0 + 1e-12);
        CHECK(v >= lo - 1e-9);
    }

    // A different seed explores differently.
    TrainConfig other = cfg;
    other.seed = 32;
    const TrainResult c = train(maps, cam, oracle, other);
    bool any_diff = false;
    for (std::size_t i = 0; i < 800; ++i)
        if (a.table.raw_values()[i] != c.table.raw_values()[i]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("pure-random training covers the proposal product set") {
    TextureProfile sparse;
    sparse.rich_density = 10.0;
    const std::vector<WorldMap> maps{generate_map(9, MapStyle::corner, sparse)};
    const CameraModel cam;
    const BreakageModel oracle = calibrate(0.02, 0.5);
    TrainConfig cfg;
    cfg.steps_budget = 5000;
    cfg.schedule.increment = 0.0;  // epsilon pinned at 0: uniform random walk
    cfg.seed = 77;

    const TrainResult res = train(maps, cam, oracle, cfg);

    // Census over the sample log: visited cells vs. the product of observed
    // axis values (proposal angles x directions x reachable overlap bins).
    std::set<int> cells;
    std::set<int> angle_bins, eta_bins, overlap_bins;
    for (const auto& s : res.samples) {
        const CellIndex c = discretize(s.feats);
        cells.insert(c.flat());
        angle_bins.insert(c.angle_bin);
        eta_bins.insert(c.eta_bin);
        overlap_bins.insert(c.overlap_bin);
    }
    const double reachable =
        static_cast<double>(angle_bins.size() * eta_bins.size() * overlap_bins.size());
    CHECK(static_cast<double>(cells.size()) >= 0.6 * reachable);
}

TEST_CASE("qtable persistence round-trips bit-exactly") {
    QTable q({0.25, 0.35});
    RngStream rng(4, "test/qlearn/fill");
    for (int i = 0; i < kCellCount; ++i)
        q.set_raw(i, -rng.uniform(0.0, 30.0), static_cast<std::int64_t>(rng.bounded(50)));

    QTableMeta meta;
    meta.oracle = calibrate(0.02, 0.5, 2.0, 99);
    meta.seed = 123456789;
    meta.steps = 4242;
    meta.threshold = -9.25;
    meta.min_visits = 17;
    meta.schedule.increment = 0.04;

    const auto path = tmp_file("slamsafe_qtable_rt.json");
    save_qtable(path.string(), q, meta);
    const LoadedQTable back = load_qtable(path.string());

    for (int i = 0; i < kCellCount; ++i) {
        CHECK(back.table.raw_values()[i] == q.raw_values()[i]);
        CHECK(back.table.raw_visits()[i] == q.raw_visits()[i]);
    }
    CHECK(back.table.hyperparams().alpha == 0.25);
    CHECK(back.table.hyperparams().gamma == 0.35);
    CHECK(back.meta.seed == meta.seed);
    CHECK(back.meta.steps == meta.steps);
    CHECK(back.meta.threshold == meta.threshold);
    CHECK(back.meta.min_visits == 17);
    CHECK(back.meta.oracle.b0 == meta.oracle.b0);
    CHECK(back.meta.oracle.b_overlap == meta.oracle.b_overlap);
    CHECK(back.meta.schedule.increment == 0.04);
    fs::remove(path);
}

TEST_CASE("qtable loading rejects bad files") {
    CHECK_THROWS_AS(load_qtable("/nonexistent/swear_not_here.json"), MissingArtifactError);

    const auto path = tmp_file("slamsafe_qtable_bad.json");
    {
        std::ofstream out(path);
        out << "{\"schema\": \"qtable\", \"values\": []}";  // no version field
    }
    CHECK_THROWS_AS(load_qtable(path.string()), FormatError);
    {
        std::ofstream out(path);
        out << "this is not json";
    }
    CHECK_THROWS_AS(load_qtable(path.string()), FormatError);
    fs::remove(path);
}

TEST_CASE("training log and samples round-trip through CSV") {
    std::vector<EpisodeLog> log{{0, 12, 0.0, TerminalReason::breakage},
                                {1, 500, 0.05, TerminalReason::step_cap}};
    const auto lpath = tmp_file("slamsafe_train_log.csv");
    save_train_log(lpath.string(), log);
    const auto rows = read_csv(lpath.string());
    REQUIRE(rows.size() == 3);  // header + 2
    CHECK(rows[0] == std::vector<std::string>{"episode", "steps", "epsilon", "terminal_reason"});
    CHECK(rows[1][1] == "12");
    CHECK(rows[2][3] == "step_cap");
    fs::remove(lpath);

    std::vector<StepSample> samples{{0, 0, {Direction::forward, 4.5, 120}, false},
                                    {0, 1, {Direction::backward, 27.0, 30}, true}};
    const auto spath = tmp_file("slamsafe_samples_rt.csv");
    save_samples(spath.string(), samples);
    const auto back = load_samples(spath.string());
    REQUIRE(back.size() == 2);
    CHECK(back[0].feats.eta == Direction::forward);
    CHECK(back[0].feats.dtheta_deg == 4.5);
    CHECK(back[1].feats.overlap == 30);
    CHECK(back[1].phi);
    fs::remove(spath);
}
