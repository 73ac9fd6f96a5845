#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slamsafe/features.hpp"

namespace slamsafe {

// Supervised analogue of the action filter: a Gaussian-kernel classifier
// over the same (eta, dtheta, overlap) triples, labeled by the breakage
// flag. Positive margin means predicted non-breaking (safe).
struct SupportVector {
    std::array<double, 3> x{};  // standardized feature triple
    double y{0.0};              // +1 non-breaking, -1 breaking
    double alpha{0.0};          // dual coefficient in [0, C]
};

struct KernelClassifier {
    std::vector<SupportVector> support;
    double bias{0.0};
    double sigma{1.0};
    double C{1.0};
    std::array<double, 3> mean{};  // standardization stats over raw triples
    std::array<double, 3> stdev{{1.0, 1.0, 1.0}};
};

struct SvmSample {
    StateActionFeatures feats;
    bool phi{false};
};

struct SvmParams {
    double C{1.0};
    double tol{1e-3};       // KKT tolerance
    double sigma{0.0};      // <= 0 selects the median pairwise distance heuristic
    int max_passes{1};      // clean full sweeps before declaring convergence
    std::int64_t max_updates{2000000};
};

// Raw triple -> numeric vector (forward = +1, backward = -1).
std::array<double, 3> encode_features(const StateActionFeatures& f);

// Pairwise-coordinate (SMO-style) dual solver. Throws DegenerateError when
// only one class is present.
KernelClassifier svm_train(const std::vector<SvmSample>& samples, const SvmParams& params = {});

// Signed distance from the decision boundary (positive = safe side).
double svm_margin(const KernelClassifier& clf, const StateActionFeatures& f);

// Largest KKT violation over the training set: interior support vectors
// must sit on the margin, bound ones on the correct side of it.
double kkt_violation(const KernelClassifier& clf, const std::vector<SvmSample>& samples);

void save_svm(const std::string& path, const KernelClassifier& clf);
KernelClassifier load_svm(const std::string& path);

}  // namespace slamsafe
