#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "slamsafe/errors.hpp"
#include "slamsafe/nbv.hpp"
#include "slamsafe/policy.hpp"
#include "slamsafe/rng.hpp"
#include "slamsafe/svm.hpp"

using namespace slamsafe;
namespace fs = std::filesystem;

namespace {

StateActionFeatures feat(double dtheta_deg, int overlap,
                         Direction eta = Direction::forward) {
    StateActionFeatures f;
    f.eta = eta;
    f.dtheta_deg = dtheta_deg;
    f.overlap = overlap;
    return f;
}

std::vector<SvmSample> blob_samples(std::uint64_t seed, int per_class) {
    RngStream rng(seed, "test/svm/blobs");
    std::vector<SvmSample> out;
    for (int i = 0; i < per_class; ++i) {
        SvmSample clean;
        clean.feats = feat(rng.uniform(1.0, 3.0),
                           static_cast<int>(rng.uniform(450.0, 550.0)));
        clean.phi = false;
        out.push_back(clean);
        SvmSample breaking;
        breaking.feats = feat(rng.uniform(24.0, 26.0),
                              static_cast<int>(rng.uniform(20.0, 80.0)));
        breaking.phi = true;
        out.push_back(breaking);
    }
    return out;
}

// One landmark on the +y axis facing down, two poses on the x axis aimed at it.
WorldMap single_landmark_map() {
    WorldMap map;
    map.name = "one_lm";
    map.bounds = {-10.0, -10.0, 10.0, 10.0};
    Landmark lm;
    lm.id = 0;
    lm.position = {0.0, 4.0};
    lm.normal = {0.0, -1.0};
    map.landmarks.push_back(lm);
    map.start = make_pose(-2.0, 0.0, 0.0);
    map.goal = {2.0, 0.0};
    map.rebuild_index();
    return map;
}

Pose aimed_at(Vec2 at, Vec2 target) {
    return make_pose(at.x, at.y, std::atan2(target.y - at.y, target.x - at.x));
}

} // namespace

TEST_CASE("overlap rule thresholds on shared features alone") {
    CHECK(overlap_only_safe(feat(5.0, 500), 150));
    CHECK(overlap_only_safe(feat(25.0, 150), 150));  // boundary counts as safe
    CHECK_FALSE(overlap_only_safe(feat(0.0, 0), 150));
    CHECK_FALSE(overlap_only_safe(feat(0.0, 149), 150));
    CHECK(overlap_only_safe(feat(0.0, 1), 1));
}

TEST_CASE("svm separates clean blobs exactly") {
    const auto samples = blob_samples(11, 40);
    const KernelClassifier clf = svm_train(samples);
    for (const auto& s : samples) {
        const double m = svm_margin(clf, s.feats);
        if (s.phi)
            CHECK(m < 0.0);
        else
            CHECK(m > 0.0);
    }
    CHECK(kkt_violation(clf, samples) <= 2e-3);

    const auto path = fs::temp_directory_path() / "slamsafe_svm.json";
    save_svm(path.string(), clf);
    const KernelClassifier back = load_svm(path.string());
    RngStream probe(12, "test/svm/probe");
    for (int i = 0; i < 10; ++i) {
        const auto f = feat(probe.uniform(0.0, 27.0),
                            static_cast<int>(probe.uniform(0.0, 600.0)));
        CHECK(svm_margin(back, f) == doctest::Approx(svm_margin(clf, f)).epsilon(1e-12));
    }
    fs::remove(path);
}

TEST_CASE("svm handles a non-linear checkerboard") {
    RngStream rng(13, "test/svm/xor");
    std::vector<SvmSample> samples;
    const double lo_a = 3.0, hi_a = 24.0;
    const double lo_o = 100.0, hi_o = 500.0;
    for (int i = 0; i < 25; ++i) {
        auto jitter_a = [&] { return rng.uniform(-2.0, 2.0); };
        auto jitter_o = [&] { return rng.uniform(-40.0, 40.0); };
        // (low angle, high overlap) and (high angle, low overlap) -> clean
        samples.push_back({feat(lo_a + jitter_a(), static_cast<int>(hi_o + jitter_o())), false});
        samples.push_back({feat(hi_a + jitter_a(), static_cast<int>(lo_o + jitter_o())), false});
        // opposite corners -> breaking
        samples.push_back({feat(lo_a + jitter_a(), static_cast<int>(lo_o + jitter_o())), true});
        samples.push_back({feat(hi_a + jitter_a(), static_cast<int>(hi_o + jitter_o())), true});
    }
    const KernelClassifier clf = svm_train(samples);
    int correct = 0;
    for (const auto& s : samples) {
        const bool safe = svm_margin(clf, s.feats) >= 0.0;
        correct += (safe == !s.phi);
    }
    CHECK(correct >= static_cast<int>(samples.size() * 95) / 100);
}

TEST_CASE("svm refuses single-class training sets") {
    std::vector<SvmSample> samples;
    for (int i = 0; i < 10; ++i) samples.push_back({feat(2.0 + i, 400), false});
    CHECK_THROWS_AS(svm_train(samples), DegenerateError);
}

TEST_CASE("nbv quality peaks for a wide symmetric baseline") {
    const WorldMap map = single_landmark_map();
    const CameraModel cam;
    const NBVQualityModel model;
    const Vec2 lm{0.0, 4.0};
    const Pose prev = aimed_at({-2.0, 0.0}, lm);
    const Pose next = aimed_at({2.0, 0.0}, lm);
    // 53.1 deg triangulation, equal incidence, equal range: every factor saturates.
    CHECK(nbv_quality(map, cam, model, prev, next) == doctest::Approx(1.0).epsilon(1e-12));
    // Swapping the roles keeps the symmetric score.
    CHECK(nbv_quality(map, cam, model, next, prev) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nbv quality vanishes without baseline or landmarks") {
    const WorldMap map = single_landmark_map();
    const CameraModel cam;
    const NBVQualityModel model;
    const Pose p = aimed_at({-2.0, 0.0}, {0.0, 4.0});
    CHECK(nbv_quality(map, cam, model, p, p) == doctest::Approx(0.0).epsilon(1e-12));

    const Pose away = make_pose(-2.0, 0.0, -kPi / 2.0);  // looking away from the landmark
    CHECK(nbv_quality(map, cam, model, p, away) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("nbv quality does not improve as the baseline shrinks") {
    const WorldMap map = single_landmark_map();
    const CameraModel cam;
    const NBVQualityModel model;
    const Vec2 lm{0.0, 4.0};
    double prev_q = 2.0;
    for (double b : {2.0, 1.0, 0.5, 0.15, 0.08}) {
        const double q = nbv_quality(map, cam, model, aimed_at({-b, 0.0}, lm),
                                     aimed_at({b, 0.0}, lm));
        CHECK(q <= prev_q + 1e-12);
        prev_q = q;
    }
    CHECK(prev_q < 1.0);  // the tightest baseline has fallen off the plateau
}

TEST_CASE("policy adapters expose their scores") {
    const WorldMap map = single_landmark_map();
    const CameraModel cam;
    StepContext ctx;
    ctx.from = aimed_at({-2.0, 0.0}, {0.0, 4.0});
    ctx.to = aimed_at({2.0, 0.0}, {0.0, 4.0});
    ctx.feats = feat(3.0, 400);

    QTable q;
    for (int i = 0; i < kCellCount; ++i) q.set_raw(i, -9.0, 5);
    const RlPolicy rl(std::move(q), FilterConfig{});
    const auto rv = rl.assess(map, cam, ctx);
    CHECK(rv.safe);
    CHECK(rv.score == doctest::Approx(-9.0));
    CHECK(rl.name() == "rl");

    const auto samples = blob_samples(14, 30);
    const SvmPolicy svm(svm_train(samples));
    const auto sv = svm.assess(map, cam, ctx);
    CHECK(sv.safe == (sv.score >= 0.0));
    CHECK(svm.name() == "svm");

    const OverlapPolicy ov(150);
    CHECK(ov.assess(map, cam, ctx).safe);
    StepContext low = ctx;
    low.feats = feat(3.0, 10);
    CHECK_FALSE(ov.assess(map, cam, low).safe);
    CHECK(ov.name() == "overlap");

    WorldMap empty = single_landmark_map();
    empty.landmarks.clear();
    empty.rebuild_index();
    const NbvPolicy nbv;
    const auto nv = nbv.assess(empty, cam, ctx);
    CHECK_FALSE(nv.safe);
    CHECK(nv.score == doctest::Approx(0.0));
    CHECK(nbv.name() == "nbv");

    const NaivePolicy naive;
    CHECK(naive.assess(map, cam, ctx).safe);
    CHECK(naive.name() == "naive");
}
