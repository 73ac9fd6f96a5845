#pragma once

#include <cstdint>

#include "slamsafe/features.hpp"
#include "slamsafe/rng.hpp"

namespace slamsafe {

// Synthetic stand-in for a live monocular SLAM system. Tracking loss is a
// Bernoulli draw whose probability rises as co-visibility drops and heading
// change grows:
//
//   P(break) = logistic(b0 + b_overlap * (1 - overlap/600)
//                          + b_angle   * (dtheta_deg/27))
struct BreakageModel {
    double b0{0.0};
    double b_overlap{0.0};
    double b_angle{0.0};
    std::uint64_t rng_seed{0};

    double probability(const StateActionFeatures& f) const;
};

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Draws the breakage flag for one executed step. Throws RangeError if the
// features arrive un-clamped (dtheta > 30 deg or overlap > 600).
bool breakage(const BreakageModel& model, const StateActionFeatures& f, RngStream& stream);

// Solves coefficients so that the two corner probabilities are hit exactly:
//   P(overlap=600, dtheta=0)  = target_low
//   P(overlap=0,   dtheta=27) = target_high
// ratio controls b_overlap : b_angle. Degenerate targets (low >= high) fall
// back to the flat model b_overlap = b_angle = 0, b0 = logit(target_high).
BreakageModel calibrate(double target_low, double target_high, double ratio = 2.0,
                        std::uint64_t rng_seed = 0);

inline constexpr double kDefaultOracleLow = 0.02;
inline constexpr double kDefaultOracleHigh = 0.5;

}  // namespace slamsafe
