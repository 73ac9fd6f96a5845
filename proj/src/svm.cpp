#include "slamsafe/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "slamsafe/errors.hpp"

namespace slamsafe {

using ordered_json = nlohmann::ordered_json;

std::array<double, 3> encode_features(const StateActionFeatures& f) {
    return {f.eta == Direction::forward ? 1.0 : -1.0, f.dtheta_deg,
            static_cast<double>(f.overlap)};
}

namespace {

double sq_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

double rbf(const std::array<double, 3>& a, const std::array<double, 3>& b, double sigma) {
    return std::exp(-sq_dist(a, b) / (2.0 * sigma * sigma));
}

// Median pairwise distance over at most 2000 stride-subsampled points.
double median_pairwise(const std::vector<std::array<double, 3>>& xs) {
    const std::size_t cap = 2000;
    const std::size_t stride = std::max<std::size_t>(1, xs.size() / cap);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < xs.size(); i += stride) idx.push_back(i);
    std::vector<double> d;
    d.reserve(idx.size() * (idx.size() - 1) / 2);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            d.push_back(std::sqrt(sq_dist(xs[idx[a]], xs[idx[b]])));
        }
    }
    if (d.empty()) return 1.0;
    std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
    const double med = d[d.size() / 2];
    return med > 1e-9 ? med : 1.0;
}

}  // namespace

KernelClassifier svm_train(const std::vector<SvmSample>& samples, const SvmParams& params) {
    const std::size_t n = samples.size();
    bool saw_pos = false;
    bool saw_neg = false;
    for (const auto& s : samples) (s.phi ? saw_neg : saw_pos) = true;
    if (!saw_pos || !saw_neg) {
        throw DegenerateError("svm_train: both classes must be present");
    }

    // Standardize each dimension; constant dimensions keep stdev 1.
    KernelClassifier clf;
    clf.C = params.C;
    std::vector<std::array<double, 3>> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = encode_features(samples[i].feats);
        ys[i] = samples[i].phi ? -1.0 : 1.0;
    }
    for (int d = 0; d < 3; ++d) {
        double mean = 0.0;
        for (const auto& x : xs) mean += x[d];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& x : xs) var += (x[d] - mean) * (x[d] - mean);
        var /= static_cast<double>(n);
        clf.mean[d] = mean;
        clf.stdev[d] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }
    for (auto& x : xs) {
        for (int d = 0; d < 3; ++d) x[d] = (x[d] - clf.mean[d]) / clf.stdev[d];
    }
    clf.sigma = params.sigma > 0.0 ? params.sigma : median_pairwise(xs);

    // Simplified SMO with an incrementally maintained decision-value cache.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> fval(n, 0.0);  // decision value per sample (bias included)
    double b = 0.0;
    const double C = params.C;
    const double tol = params.tol;

    auto kernel = [&](std::size_t i, std::size_t j) { return rbf(xs[i], xs[j], clf.sigma); };

    // One pairwise step on (i, j); returns false when the step is degenerate
    // (duplicate point, collapsed box, or negligible move).
    auto attempt = [&](std::size_t i, std::size_t j, double Ei) -> bool {
        if (j == i) return false;
        const double Ej = fval[j] - ys[j];
        const double kij = kernel(i, j);
        const double eta = 2.0 * kij - 2.0;  // kii = kjj = 1 for the rbf kernel
        if (eta >= -1e-12) return false;

        double L;
        double H;
        if (ys[i] != ys[j]) {
            L = std::max(0.0, alpha[j] - alpha[i]);
            H = std::min(C, C + alpha[j] - alpha[i]);
        } else {
            L = std::max(0.0, alpha[i] + alpha[j] - C);
            H = std::min(C, alpha[i] + alpha[j]);
        }
        if (H - L < 1e-12) return false;

        double aj = alpha[j] - ys[j] * (Ei - Ej) / eta;
        aj = std::clamp(aj, L, H);
        const double dj = aj - alpha[j];
        if (std::abs(dj) < 1e-7) return false;
        const double ai = alpha[i] - ys[i] * ys[j] * dj;
        const double di = ai - alpha[i];

        // Bias via the standard b1/b2 rule.
        const double b1 = b - Ei - ys[i] * di - ys[j] * dj * kij;
        const double b2 = b - Ej - ys[i] * di * kij - ys[j] * dj;
        double b_new;
        if (ai > 0.0 && ai < C) {
            b_new = b1;
        } else if (aj > 0.0 && aj < C) {
            b_new = b2;
        } else {
            b_new = 0.5 * (b1 + b2);
        }
        const double db = b_new - b;

        for (std::size_t m = 0; m < n; ++m) {
            fval[m] += ys[i] * di * kernel(i, m) + ys[j] * dj * kernel(j, m) + db;
        }
        alpha[i] = ai;
        alpha[j] = aj;
        b = b_new;
        return true;
    };

    std::int64_t updates = 0;
    int clean_passes = 0;
    while (clean_passes < params.max_passes && updates < params.max_updates) {
        int changed = 0;
        for (std::size_t i = 0; i < n && updates < params.max_updates; ++i) {
            const double Ei = fval[i] - ys[i];
            const bool violates = (ys[i] * Ei < -tol && alpha[i] < C) ||
                                  (ys[i] * Ei > tol && alpha[i] > 0.0);
            if (!violates) continue;

            // Partner: largest |Ei - Ej| first, then every other index in
            // deterministic order, so a degenerate first pick never leaves
            // the violation unaddressed.
            std::size_t j = i;
            double best_gap = -1.0;
            for (std::size_t m = 0; m < n; ++m) {
                if (m == i) continue;
                const double gap = std::abs(Ei - (fval[m] - ys[m]));
                if (gap > best_gap) {
                    best_gap = gap;
                    j = m;
                }
            }
            bool done = attempt(i, j, Ei);
            for (std::size_t off = 1; !done && off < n; ++off) {
                const std::size_t cand = (i + off) % n;
                if (cand == j) continue;
                done = attempt(i, cand, Ei);
            }
            if (done) {
                ++changed;
                ++updates;
            }
        }
        clean_passes = changed == 0 ? clean_passes + 1 : 0;
    }

    clf.bias = b;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 1e-12) {
            clf.support.push_back({xs[i], ys[i], alpha[i]});
        }
    }
    return clf;
}

namespace {

double margin_standardized(const KernelClassifier& clf, const std::array<double, 3>& z) {
    double s = clf.bias;
    for (const auto& sv : clf.support) {
        s += sv.alpha * sv.y * rbf(sv.x, z, clf.sigma);
    }
    return s;
}

}  // namespace

double svm_margin(const KernelClassifier& clf, const StateActionFeatures& f) {
    std::array<double, 3> z = encode_features(f);
    for (int d = 0; d < 3; ++d) z[d] = (z[d] - clf.mean[d]) / clf.stdev[d];
    return margin_standardized(clf, z);
}

double kkt_violation(const KernelClassifier& clf, const std::vector<SvmSample>& samples) {
    // Rebuild dual coefficients for the full set: non-support samples have
    // alpha 0. Matching is by standardized coordinates.
    double worst = 0.0;
    for (const auto& s : samples) {
        std::array<double, 3> z = encode_features(s.feats);
        for (int d = 0; d < 3; ++d) z[d] = (z[d] - clf.mean[d]) / clf.stdev[d];
        const double y = s.phi ? -1.0 : 1.0;
        const double yf = y * margin_standardized(clf, z);
        double alpha = 0.0;
        for (const auto& sv : clf.support) {
            if (sv.y == y && sq_dist(sv.x, z) < 1e-18) {
                alpha = sv.alpha;
                break;
            }
        }
        double v = 0.0;
        if (alpha <= 1e-12) {
            v = std::max(0.0, 1.0 - yf);  // must be outside or on the margin
        } else if (alpha >= clf.C - 1e-12) {
            v = std::max(0.0, yf - 1.0);  // must be inside or on the margin
        } else {
            v = std::abs(yf - 1.0);  // must sit on the margin
        }
        worst = std::max(worst, v);
    }
    return worst;
}

namespace {

constexpr int kSvmSchemaVersion = 1;

}  // namespace

void save_svm(const std::string& path, const KernelClassifier& clf) {
    ordered_json j;
    j["schema"] = "svm";
    j["version"] = kSvmSchemaVersion;
    j["C"] = clf.C;
    j["sigma"] = clf.sigma;
    j["bias"] = clf.bias;
    j["mean"] = clf.mean;
    j["stdev"] = clf.stdev;
    auto svs = ordered_json::array();
    for (const auto& sv : clf.support) {
        svs.push_back({{"x", sv.x}, {"y", sv.y}, {"alpha", sv.alpha}});
    }
    j["support"] = std::move(svs);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write svm file: " + path);
    out << j.dump(1) << "\n";
}

KernelClassifier load_svm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot read svm file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("svm parse error: ") + e.what());
    }
    if (!j.contains("schema") || !j.contains("version"))
        throw FormatError("svm file missing schema/version field");
    if (j["schema"] != "svm" || j["version"] != kSvmSchemaVersion)
        throw FormatError("unsupported svm schema/version");
    KernelClassifier clf;
    try {
        clf.C = j.at("C");
        clf.sigma = j.at("sigma");
        clf.bias = j.at("bias");
        clf.mean = j.at("mean");
        clf.stdev = j.at("stdev");
        for (const auto& sv : j.at("support")) {
            clf.support.push_back({sv.at("x"), sv.at("y"), sv.at("alpha")});
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("svm field error: ") + e.what());
    }
    return clf;
}

}  // namespace slamsafe
