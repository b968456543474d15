#include "bornsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace bornsim {

std::pair<double, double> RngStream::gaussian_pair() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace bornsim
