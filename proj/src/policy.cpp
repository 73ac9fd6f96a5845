#include "slamsafe/policy.hpp"

namespace slamsafe {

bool overlap_only_safe(const StateActionFeatures& f, int cutoff) {
    return f.overlap >= cutoff;
}

}  // namespace slamsafe
