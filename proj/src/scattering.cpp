#include "bornsim/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bornsim/errors.hpp"
#include "bornsim/parallel.hpp"

namespace bornsim {

namespace {

constexpr unsigned kQubitModes = 2;

using RowVector = std::map<std::pair<unsigned, int>, Complex>;

RowVector as_vector(const std::vector<ScatteringEntry>& row) {
    RowVector v;
    for (const auto& e : row) v[{e.qubit_out, e.label}] += e.amplitude;
    return v;
}

Complex inner(const RowVector& lhs, const RowVector& rhs) {
    Complex sum = 0.0;
    for (const auto& [key, value] : lhs) {
        auto it = rhs.find(key);
        if (it != rhs.end()) sum += std::conj(value) * it->second;
    }
    return sum;
}

}  // namespace

PhotonState::PhotonState(Complex alpha_, Complex beta_) : alpha(alpha_), beta(beta_) {
    if (!(intensity() > 0.0) || !std::isfinite(intensity())) {
        throw Error(ErrorCode::InvalidArgument, "photon state needs |alpha|^2 + |beta|^2 > 0");
    }
}

QubitState::QubitState(Complex a_, Complex b_) : a(a_), b(b_) {
    if (!(squared_norm() > 0.0) || !std::isfinite(squared_norm())) {
        throw Error(ErrorCode::InvalidArgument, "qubit state needs |a|^2 + |b|^2 > 0");
    }
}

QubitState QubitState::from_probability(double p0) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "|a|^2 must lie in [0, 1]");
    }
    return QubitState(std::sqrt(p0), std::sqrt(1.0 - p0));
}

ScatteringProcess::ScatteringProcess(std::string name, Rows rows, std::map<int, std::string> label_names)
    : name_(std::move(name)), rows_(std::move(rows)), label_names_(std::move(label_names)) {
    std::array<RowVector, 4> vectors;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        for (const auto& e : rows_[r]) {
            if (e.qubit_out >= kQubitModes) {
                throw Error(ErrorCode::InvalidArgument,
                            "row " + std::to_string(r) + ": qubit_out must be 0 or 1");
            }
            labels_.push_back(e.label);
        }
        vectors[r] = as_vector(rows_[r]);
    }
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t s = r; s < 4; ++s) {
            const Complex overlap = inner(vectors[r], vectors[s]);
            const double target = r == s ? 1.0 : 0.0;
            if (std::abs(overlap - target) > kUnitarityTolerance) {
                throw Error(ErrorCode::NotUnitary,
                            "process '" + name_ + "': rows " + std::to_string(r) + " and " +
                                std::to_string(s) + " have overlap " + std::to_string(std::abs(overlap)));
            }
        }
    }
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());

    const std::size_t modes = kQubitModes + labels_.size();
    space_ = FockSpace::make(AccessibilityPartition(modes, {0, 1}), 2);
}

std::size_t ScatteringProcess::label_mode(int label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) {
        throw Error(ErrorCode::InvalidArgument, "unknown radiation label " + std::to_string(label));
    }
    return kQubitModes + static_cast<std::size_t>(it - labels_.begin());
}

ScatteringProcess builtin_process(BuiltinProcess which) {
    const double h = std::numbers::sqrt2 / 2.0;
    switch (which) {
        case BuiltinProcess::Uniform:
            return ScatteringProcess("uniform", {{{{0, 1, 1.0}}, {{0, 2, 1.0}}, {{1, 3, 1.0}}, {{1, 4, 1.0}}}});
        case BuiltinProcess::Maximum:
            return ScatteringProcess("maximum", {{{{0, 1, 1.0}}, {{1, 2, 1.0}}, {{0, 3, 1.0}}, {{1, 4, 1.0}}}});
        case BuiltinProcess::Born:
            return ScatteringProcess("born", {{{{0, 1, 1.0}},
                                               {{1, 2, h}, {0, 3, h}},
                                               {{0, 4, h}, {1, 5, h}},
                                               {{1, 6, 1.0}}}});
    }
    throw Error(ErrorCode::InvalidArgument, "unknown builtin process");
}

PhotonState sample_photon(RngStream& rng) {
    for (;;) {
        const auto [g1, g2] = rng.gaussian_pair();
        const auto [g3, g4] = rng.gaussian_pair();
        const Complex alpha(g1, g2);
        const Complex beta(g3, g4);
        if (std::abs(alpha) >= 1e-12 || std::abs(beta) >= 1e-12) return PhotonState(alpha, beta);
    }
}

FockStateVector scatter_global(const ScatteringProcess& process, const PhotonState& photon,
                               const QubitState& qubit) {
    const std::array<Complex, 2> photon_amp{photon.alpha, photon.beta};
    const std::array<Complex, 2> qubit_amp{qubit.a, qubit.b};
    const std::size_t modes = process.output_space()->single_particle_dim();

    FockStateVector out(process.output_space());
    Occupations occupations(modes, 0);
    for (unsigned p = 0; p < 2; ++p) {
        for (unsigned q = 0; q < 2; ++q) {
            const Complex input = photon_amp[p] * qubit_amp[q];
            if (input == Complex(0.0)) continue;
            for (const auto& e : process.row(p, q)) {
                const std::size_t label_mode = process.label_mode(e.label);
                occupations[e.qubit_out] = 1;
                occupations[label_mode] = 1;
                out.add(occupations, input * e.amplitude);
                occupations[e.qubit_out] = 0;
                occupations[label_mode] = 0;
            }
        }
    }
    return out;
}

StrippedWeights stripped_weights(const ScatteringProcess& process, const PhotonState& photon,
                                 const QubitState& qubit) {
    const StrippedState stripped = strip(scatter_global(process, photon, qubit));
    const FockSpace& space = *stripped.space;
    const auto zero = static_cast<Eigen::Index>(space.accessible_index({1, 0}));
    const auto one = static_cast<Eigen::Index>(space.accessible_index({0, 1}));
    return {stripped.op.entries()(zero, zero).real(), stripped.op.entries()(one, one).real()};
}

Outcome decide(const StrippedWeights& weights, double tie_tolerance) {
    if (std::abs(weights.zero - weights.one) <= tie_tolerance * std::max(weights.zero, weights.one)) {
        throw Error(ErrorCode::TieOutcome, "stripped weights " + std::to_string(weights.zero) + " and " +
                                               std::to_string(weights.one) + " are tied");
    }
    return weights.zero > weights.one ? Outcome::Zero : Outcome::One;
}

LocalOutcome local_outcome(const ScatteringProcess& process, const PhotonState& photon,
                           const QubitState& qubit, double tie_tolerance) {
    const StrippedWeights w = stripped_weights(process, photon, qubit);
    return {decide(w, tie_tolerance), w.zero, w.one};
}

BornProbabilities born_probabilities(const QubitState& qubit) {
    const double p0 = std::norm(qubit.a) / qubit.squared_norm();
    return {p0, 1.0 - p0};
}

double rayleigh_oracle(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw Error(ErrorCode::InvalidArgument, "ratio must be finite and positive");
    }
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    constexpr unsigned kMaxDepth = 12;
    constexpr double kRelativeTolerance = 1e-11;
    constexpr double kTargetError = 1e-8;

    const auto density = [](double x) { return x * std::exp(-0.5 * x * x); };

    // The outer density integrates to one, so the worst inner error bounds
    // its contribution to the total.
    double worst_inner_error = 0.0;
    const auto outer = [&](double x1) {
        const double f1 = density(x1);
        if (f1 == 0.0) return 0.0;
        double inner_error = 0.0;
        const double inner =
            Quadrature::integrate(density, 0.0, ratio * x1, kMaxDepth, kRelativeTolerance, &inner_error);
        worst_inner_error = std::max(worst_inner_error, inner_error);
        return f1 * inner;
    };

    double outer_error = 0.0;
    const double value = Quadrature::integrate(outer, 0.0, std::numeric_limits<double>::infinity(), kMaxDepth,
                                               kRelativeTolerance, &outer_error);
    const double error = outer_error + worst_inner_error;
    if (!(error <= kTargetError)) {
        throw Error(ErrorCode::QuadratureFailure, "error estimate " + std::to_string(error) + " exceeds 1e-8");
    }
    return value;
}

double OutcomeStatistics::frequency_zero() const {
    return decided() == 0 ? 0.0 : static_cast<double>(zero) / static_cast<double>(decided());
}

double OutcomeStatistics::standard_error() const {
    const double p = frequency_zero();
    return decided() == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(decided()));
}

OutcomeStatistics& OutcomeStatistics::operator+=(const OutcomeStatistics& other) {
    trials += other.trials;
    zero += other.zero;
    one += other.one;
    ties += other.ties;
    return *this;
}

OutcomeStatistics run_trials(const ScatteringProcess& process, const QubitState& qubit, std::uint64_t n_trials,
                             std::uint64_t seed) {
    if (n_trials == 0) throw Error(ErrorCode::InvalidArgument, "n_trials must be at least 1");
    return parallel_accumulate<OutcomeStatistics>(n_trials, [&](std::uint64_t begin, std::uint64_t end) {
        OutcomeStatistics stats;
        for (std::uint64_t t = begin; t < end; ++t) {
            RngStream rng(seed, t);
            const PhotonState photon = sample_photon(rng);
            ++stats.trials;
            const StrippedWeights w = stripped_weights(process, photon, qubit);
            if (std::abs(w.zero - w.one) <= kOutcomeTieTolerance * std::max(w.zero, w.one)) {
                ++stats.ties;
            } else if (w.zero > w.one) {
                ++stats.zero;
            } else {
                ++stats.one;
            }
        }
        return stats;
    });
}

}  // namespace bornsim
