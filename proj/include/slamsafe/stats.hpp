#pragma once

// Small statistics helpers used by the experiment harness: summary
// moments, rank transforms, Spearman correlation, and a permutation
// test for the correlation's significance.

#include <cstddef>
#include <span>
#include <vector>

#include "slamsafe/rng.hpp"

namespace slamsafe {

// Arithmetic mean.  Throws RangeError on empty input.
double mean(std::span<const double> xs);

// Sample standard deviation (n - 1 denominator).  Returns 0 for fewer
// than two values.
double sample_stdev(std::span<const double> xs);

// Standard error of the mean: sample_stdev / sqrt(n).
double std_error(std::span<const double> xs);

// Fractional ranks (1-based), ties receive the average of the ranks
// they span.
std::vector<double> ranks(std::span<const double> xs);

// Spearman rank correlation coefficient.  Throws DegenerateError when
// either input is constant (undefined correlation) and RangeError when
// the lengths differ or fall below two.
double spearman(std::span<const double> x, std::span<const double> y);

// Direction of the alternative hypothesis for the permutation test.
enum class Tail { Less, Greater, TwoSided };

// Permutation p-value for the Spearman correlation of (x, y): the y
// values are shuffled `n_perm` times with the supplied stream and the
// observed coefficient is compared against the permutation
// distribution.  Uses the add-one estimator (count + 1) / (n_perm + 1)
// so the result is never exactly zero.
double spearman_perm_pvalue(std::span<const double> x, std::span<const double> y,
                            int n_perm, RngStream& rng, Tail tail);

} // namespace slamsafe
