#include "bornsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "bornsim/errors.hpp"

namespace bornsim::stats {

double chi_square_sf(double x, double df) {
    if (df <= 0.0) return x > 0.0 ? 0.0 : 1.0;
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> expected_probabilities) {
    if (observed.size() != expected_probabilities.size()) {
        throw Error(ErrorCode::InvalidArgument, "observed and expected sizes differ");
    }
    std::uint64_t total = 0;
    for (auto c : observed) total += c;

    ChiSquareResult result;
    if (total == 0) return result;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = expected_probabilities[i] * static_cast<double>(total);
        if (expected <= 0.0) {
            if (observed[i] > 0) {
                result.statistic = std::numeric_limits<double>::infinity();
                result.p_value = 0.0;
                return result;
            }
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - expected;
        result.statistic += diff * diff / expected;
        ++cells;
    }
    result.dof = cells > 0 ? static_cast<double>(cells - 1) : 0.0;
    result.p_value = chi_square_sf(result.statistic, result.dof);
    return result;
}

ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> first,
                                      std::span<const std::uint64_t> second) {
    if (first.size() != second.size()) {
        throw Error(ErrorCode::InvalidArgument, "sample histograms have different sizes");
    }
    ChiSquareResult result;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        const double r = static_cast<double>(first[i]);
        const double s = static_cast<double>(second[i]);
        if (r + s == 0.0) continue;
        result.statistic += (r - s) * (r - s) / (r + s);
        ++cells;
    }
    result.dof = cells > 0 ? static_cast<double>(cells - 1) : 0.0;
    result.p_value = chi_square_sf(result.statistic, result.dof);
    return result;
}

double kolmogorov_sf(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    KsResult result;
    if (sample.empty()) return result;
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double root_n = std::sqrt(n);
    result.statistic = d;
    // Stephens' finite-n correction to the asymptotic distribution.
    result.p_value = kolmogorov_sf((root_n + 0.12 + 0.11 / root_n) * d);
    return result;
}

}  // namespace bornsim::stats
