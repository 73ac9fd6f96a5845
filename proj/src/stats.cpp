#include "slamsafe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slamsafe/errors.hpp"

namespace slamsafe {

double mean(std::span<const double> xs) {
    if (xs.empty()) throw RangeError("mean of empty range");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stdev(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double std_error(std::span<const double> xs) {
    if (xs.empty()) throw RangeError("std_error of empty range");
    return sample_stdev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

std::vector<double> ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

    std::vector<double> out(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && xs[order[j]] == xs[order[i]]) ++j;
        // Positions i..j-1 share a value; assign the average 1-based rank.
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) out[order[k]] = avg;
        i = j;
    }
    return out;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DegenerateError("constant input to correlation");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw RangeError("spearman: length mismatch");
    if (x.size() < 2) throw RangeError("spearman: need at least two points");
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    return pearson(rx, ry);
}

double spearman_perm_pvalue(std::span<const double> x, std::span<const double> y,
                            int n_perm, RngStream& rng, Tail tail) {
    if (n_perm < 1) throw RangeError("spearman_perm_pvalue: n_perm must be positive");
    const double observed = spearman(x, y);
    std::vector<double> shuffled(y.begin(), y.end());
    int hits = 0;
    for (int p = 0; p < n_perm; ++p) {
        for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.bounded(i + 1));
            std::swap(shuffled[i], shuffled[j]);
        }
        const double stat = spearman(x, shuffled);
        switch (tail) {
        case Tail::Less: hits += stat <= observed ? 1 : 0; break;
        case Tail::Greater: hits += stat >= observed ? 1 : 0; break;
        case Tail::TwoSided: hits += std::abs(stat) >= std::abs(observed) ? 1 : 0; break;
        }
    }
    return (static_cast<double>(hits) + 1.0) / (static_cast<double>(n_perm) + 1.0);
}

} // namespace slamsafe
