#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bornsim::stats {

/// Upper tail P(X >= x) of a chi-square variable with df degrees of freedom.
double chi_square_sf(double x, double df);

struct ChiSquareResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against expected probabilities.
/// Cells with zero expected probability contribute nothing if their count is
/// zero and force p = 0 otherwise.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_probabilities);

/// Two-sample homogeneity test for equal-size samples
/// (statistic sum (r - s)^2 / (r + s)).
ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> first,
                                      std::span<const std::uint64_t> second);

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test; sorts a copy of the sample.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

inline double binomial_standard_error(double p, std::uint64_t n) {
    return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace bornsim::stats
