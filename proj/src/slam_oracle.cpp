#include "slamsafe/slam_oracle.hpp"

#include <cmath>

#include "slamsafe/errors.hpp"

namespace slamsafe {

double BreakageModel::probability(const StateActionFeatures& f) const {
    const double z = b0 + b_overlap * (1.0 - static_cast<double>(f.overlap) / kOverlapCap) +
                     b_angle * (f.dtheta_deg / kAngleTrainCapDeg);
    return logistic(z);
}

bool breakage(const BreakageModel& model, const StateActionFeatures& f, RngStream& stream) {
    if (f.dtheta_deg < 0.0 || f.dtheta_deg > kAngleMaxDeg)
        throw RangeError("breakage: dtheta_deg outside [0, 30]");
    if (f.overlap < 0 || f.overlap > kOverlapCap)
        throw RangeError("breakage: overlap outside [0, 600]");
    return stream.bernoulli(model.probability(f));
}

BreakageModel calibrate(double target_low, double target_high, double ratio,
                        std::uint64_t rng_seed) {
    BreakageModel m;
    m.rng_seed = rng_seed;
    const double lo = logit(target_low);
    const double hi = logit(target_high);
    if (!(hi > lo)) {
        // Flat fallback: no dependence on features.
        m.b0 = hi;
        m.b_overlap = 0.0;
        m.b_angle = 0.0;
        return m;
    }
    m.b0 = lo;
    const double span = hi - lo;
    // b_overlap : b_angle = ratio : 1
    m.b_angle = span / (1.0 + ratio);
    m.b_overlap = span - m.b_angle;
    return m;
}

}  // namespace slamsafe
