#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bornsim/cascade.hpp"
#include "bornsim/errors.hpp"
#include "bornsim/stats.hpp"
#include "support/oracles.hpp"

using namespace bornsim;

namespace {

Matrix diag(std::initializer_list<double> values) {
    Eigen::VectorXcd d(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) d(i++) = v;
    return d.asDiagonal();
}

ProjectorSet two_bit_set() { return ProjectorSet(4, {diag({1, 1, 0, 0}), diag({1, 0, 1, 0})}); }

// Same two-bit set in a random orthonormal basis, so the special basis is
// not the computational one.
ProjectorSet rotated_two_bit_set(const Matrix& u) {
    const ProjectorSet base = two_bit_set();
    std::vector<Matrix> ps;
    for (const Matrix& p : base.projectors()) {
        Matrix r = u * p * u.adjoint();
        ps.push_back((r + r.adjoint()) * 0.5);
    }
    return ProjectorSet(4, std::move(ps));
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::InvalidArgument;
}

// Independent joint-eigenspace enumeration for diagonal projector sets:
// group basis indices by their 0/1 pattern across projectors.
std::map<std::vector<int>, int> diagonal_patterns(const ProjectorSet& set) {
    std::map<std::vector<int>, int> patterns;
    for (std::size_t i = 0; i < set.dim(); ++i) {
        std::vector<int> pattern;
        for (const auto& p : set.projectors()) {
            pattern.push_back(p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() > 0.5);
        }
        ++patterns[pattern];
    }
    return patterns;
}

}  // namespace

TEST(Validate, SingleQubitProjector) {
    const ProjectorSet set(2, {diag({1, 0})});
    const auto report = validate(set);
    EXPECT_TRUE(report.complete);
    EXPECT_TRUE(report.independent);
    ASSERT_EQ(report.special_basis.size(), 2u);
    EXPECT_NEAR(std::abs(report.special_basis[0](0)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(report.special_basis[1](1)), 1.0, 1e-12);
    EXPECT_EQ(report.in_range[0], std::vector<std::size_t>({0}));
    EXPECT_EQ(report.in_complement[1], std::vector<std::size_t>({0}));
}

TEST(Validate, TwoBitSetAgainstPatternEnumeration) {
    const auto set = two_bit_set();
    const auto report = validate(set);
    EXPECT_TRUE(report.complete);
    EXPECT_TRUE(report.independent);
    const auto patterns = diagonal_patterns(set);
    EXPECT_EQ(patterns.size(), 4u);
    for (const auto& [pattern, count] : patterns) EXPECT_EQ(count, 1);
    EXPECT_EQ(report.joint_ranks, std::vector<std::size_t>({1, 1, 1, 1}));
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(report.special_basis[k](static_cast<Eigen::Index>(k))), 1.0, 1e-12);
}

TEST(Validate, CoarseSetIsIncomplete) {
    const auto report = validate(ProjectorSet(4, {diag({1, 1, 0, 0})}));
    EXPECT_FALSE(report.complete);
    EXPECT_EQ(report.joint_ranks, std::vector<std::size_t>({2, 2}));
}

TEST(Validate, RedundantProjectorIsNotIndependent) {
    const auto report = validate(ProjectorSet(2, {diag({1, 0}), diag({0, 1})}));
    EXPECT_TRUE(report.complete);
    EXPECT_FALSE(report.independent);
}

TEST(Validate, WitnessProductsReconstructBasisProjectors) {
    std::mt19937_64 gen(8);
    const Matrix u = oracle::random_unitary(4, gen);
    const auto set = rotated_two_bit_set(u);
    const auto report = validate(set);
    ASSERT_TRUE(report.complete);
    EXPECT_LT(report.witness_error, 1e-9);
    for (std::size_t k = 0; k < 4; ++k) {
        Matrix product = Matrix::Identity(4, 4);
        for (auto n : report.in_range[k]) product = product * set.projector(n);
        for (auto n : report.in_complement[k]) product = product * set.complement(n);
        const Vector& v = report.special_basis[k];
        EXPECT_LT((product - v * v.adjoint()).norm(), 1e-9);
    }
}

TEST(Validate, Errors) {
    Matrix not_idempotent = diag({0.5, 0});
    EXPECT_EQ(code_of([&] { validate(ProjectorSet(2, {not_idempotent})); }), ErrorCode::NotIdempotent);

    const double h = 0.5;
    Matrix plus(2, 2);
    plus << h, h, h, h;
    EXPECT_EQ(code_of([&] { validate(ProjectorSet(2, {diag({1, 0}), plus})); }), ErrorCode::NotCommuting);

    Matrix skew(2, 2);
    skew << 1.0, 0.5, 0.0, 0.0;
    EXPECT_EQ(code_of([&] { validate(ProjectorSet(2, {skew})); }), ErrorCode::NotIdempotent);

    EXPECT_EQ(code_of([&] { ProjectorSet(2, {diag({1, 0, 0})}); }), ErrorCode::InvalidArgument);
}

TEST(Split, RangeStateHasEmptyComplement) {
    const auto set = two_bit_set();
    const StateVector psi({0.6, 0.8, 0.0, 0.0});
    const auto branches = split(set, 0, psi);
    EXPECT_EQ(branches[0].bit, 0);
    EXPECT_EQ(branches[1].bit, 1);
    EXPECT_NEAR(branches[1].state.squared_norm(), 0.0, 1e-30);
}

TEST(Split, UniformState) {
    const auto branches = split(two_bit_set(), 0, StateVector({0.5, 0.5, 0.5, 0.5}));
    EXPECT_LT((branches[0].state.amplitudes() - StateVector({0.5, 0.5, 0, 0}).amplitudes()).norm(), 1e-15);
    EXPECT_LT((branches[1].state.amplitudes() - StateVector({0, 0, 0.5, 0.5}).amplitudes()).norm(), 1e-15);
}

TEST(Split, Pythagoras) {
    std::mt19937_64 gen(21);
    std::normal_distribution<double> normal;
    const auto set = rotated_two_bit_set(oracle::random_unitary(4, gen));
    for (int trial = 0; trial < 50; ++trial) {
        Vector v(4);
        for (int i = 0; i < 4; ++i) v(i) = Complex(normal(gen), normal(gen));
        const StateVector psi(v);
        for (std::size_t n = 0; n < 2; ++n) {
            const auto b = split(set, n, psi);
            EXPECT_NEAR(b[0].state.squared_norm() + b[1].state.squared_norm(), psi.squared_norm(),
                        1e-12 * psi.squared_norm());
        }
    }
}

TEST(CascadeStep, StateInRangeAlwaysGivesZero) {
    const auto set = two_bit_set();
    RngStream rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto r = cascade_step(set, 0, StateVector({0.6, 0.8, 0.0, 0.0}), sample_photon(rng));
        EXPECT_EQ(r.bit, 0);
        EXPECT_NEAR(r.stage_probability, 1.0, 1e-15);
    }
}

TEST(CascadeStep, WorkedExample) {
    const ProjectorSet set(2, {diag({1, 0})});
    const auto r = cascade_step(set, 0, StateVector({std::sqrt(0.7), std::sqrt(0.3)}), PhotonState(1.0, 1.0));
    EXPECT_EQ(r.bit, 0);
    EXPECT_NEAR(r.stage_probability, 0.7, 1e-15);
    EXPECT_NEAR(std::abs(r.state[1]), 0.0, 1e-15);
}

TEST(CascadeStep, MonteCarloMatchesStageProbability) {
    std::mt19937_64 gen(4);
    const auto set = rotated_two_bit_set(oracle::random_unitary(4, gen));
    const StateVector psi({0.2, Complex(0.5, 0.1), -0.4, Complex(0.3, 0.6)});
    const Matrix& p = set.projector(1);
    const double expected = (psi.amplitudes().adjoint() * p * psi.amplitudes())(0).real() / psi.squared_norm();

    constexpr int n = 100000;
    int zeros = 0;
    for (int t = 0; t < n; ++t) {
        RngStream rng(55, static_cast<std::uint64_t>(t));
        if (cascade_step(set, 1, psi, sample_photon(rng)).bit == 0) ++zeros;
    }
    const double freq = static_cast<double>(zeros) / n;
    EXPECT_NEAR(freq, expected, 4 * stats::binomial_standard_error(expected, n));
}

TEST(RunCascade, SingleQubitOutcomes) {
    const ProjectorSet set(2, {diag({1, 0})});
    const StateVector psi({std::sqrt(0.7), std::sqrt(0.3)});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto out = run_cascade(set, psi, seed);
        ASSERT_LT(out.basis_index, 2u);
        EXPECT_NEAR(out.probability_weight, out.basis_index == 0 ? 0.7 : 0.3, 1e-12);
        EXPECT_EQ(out.qubit_record.size(), 1u);
        EXPECT_EQ(out.qubit_record[0], out.basis_index);
    }
}

TEST(RunCascade, SpecialBasisStateIsDeterministic) {
    std::mt19937_64 gen(9);
    const auto set = rotated_two_bit_set(oracle::random_unitary(4, gen));
    const auto report = validate(set);
    for (std::size_t k = 0; k < 4; ++k) {
        const StateVector psi(report.special_basis[k]);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto out = run_cascade(set, psi, seed);
            EXPECT_EQ(out.basis_index, k);
            EXPECT_NEAR(out.probability_weight, 1.0, 1e-9);
        }
    }
}

TEST(RunCascade, FinalStateIsProportionalToBasisVector) {
    std::mt19937_64 gen(10);
    const auto set = rotated_two_bit_set(oracle::random_unitary(4, gen));
    const auto report = validate(set);
    const StateVector psi({0.3, 0.5, Complex(0.1, 0.4), -0.6});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto out = run_cascade(set, psi, seed);
        const Vector& k = report.special_basis[out.basis_index];
        const double overlap = std::norm(k.dot(out.final_state));
        EXPECT_NEAR(overlap, out.final_state.squaredNorm(), 1e-9);
        EXPECT_NEAR(out.realized_probability, out.probability_weight, 1e-9);
    }
}

TEST(RunCascade, IncompleteSetRejected) {
    const ProjectorSet set(4, {diag({1, 1, 0, 0})});
    EXPECT_EQ(code_of([&] { run_cascade(set, StateVector({0.5, 0.5, 0.5, 0.5}), 1); }), ErrorCode::IncompleteSet);
}

TEST(RunCascade, ExtraStagesKeepTheOutcome) {
    const auto set = two_bit_set();
    const StateVector psi({0.4, 0.5, 0.3, std::sqrt(0.5)});
    CascadeOptions options;
    options.extra_stages = 5;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto out = run_cascade(set, psi, seed, options);
        EXPECT_EQ(out.qubit_record.size(), 7u);
        EXPECT_EQ(out.stage_projectors.size(), 7u);
        EXPECT_NEAR(out.realized_probability, out.probability_weight, 1e-9);
    }
}

TEST(CascadeDistribution, SingleQubit) {
    const ProjectorSet set(2, {diag({1, 0})});
    const auto dist = cascade_distribution(set, StateVector({std::sqrt(0.7), std::sqrt(0.3)}), 100000, 5);
    EXPECT_NEAR(dist.frequencies()[0], 0.7, 0.006);
    EXPECT_GT(dist.chi_square.p_value, 0.001);
}

TEST(CascadeDistribution, UniformTwoBit) {
    const auto dist = cascade_distribution(two_bit_set(), StateVector({0.5, 0.5, 0.5, 0.5}), 100000, 6);
    for (double f : dist.frequencies()) EXPECT_NEAR(f, 0.25, 4 * std::sqrt(0.25 * 0.75 / 1e5));
    EXPECT_LT(dist.max_telescoping_error, 1e-9);
}

TEST(CascadeDistribution, SkewedTwoBit) {
    const StateVector psi({std::sqrt(0.4), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.1)});
    const auto dist = cascade_distribution(two_bit_set(), psi, 50000, 7);
    EXPECT_NEAR(dist.expected[0], 0.4, 1e-12);
    EXPECT_NEAR(dist.expected[3], 0.1, 1e-12);
    EXPECT_GT(dist.chi_square.p_value, 0.001);
}

TEST(CascadeDistribution, BasisStateHasZeroVariance) {
    const auto dist = cascade_distribution(two_bit_set(), StateVector({0, 0, 1, 0}), 1000, 8);
    EXPECT_EQ(dist.counts[2], 1000u);
}

TEST(CascadeDistribution, OrderInvariance) {
    std::mt19937_64 gen(12);
    const Matrix u = oracle::random_unitary(8, gen);
    std::vector<Matrix> ps;
    for (auto d : {diag({1, 1, 1, 1, 0, 0, 0, 0}), diag({1, 1, 0, 0, 1, 1, 0, 0}), diag({1, 0, 1, 0, 1, 0, 1, 0})}) {
        Matrix r = u * d * u.adjoint();
        ps.push_back((r + r.adjoint()) * 0.5);
    }
    const ProjectorSet set(8, ps);
    const auto report = validate(set);
    Vector v(8);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 8; ++i) v(i) = Complex(normal(gen), normal(gen));
    const StateVector psi(v);

    const auto canonical = analytic_weights(set, report, psi);
    const auto reversed = analytic_weights(set, report, psi, {2, 1, 0});
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(canonical[k], reversed[k], 1e-12);

    CascadeOptions forward, backward;
    backward.order = {2, 0, 1};
    const auto a = cascade_distribution(set, psi, 40000, 30, forward);
    const auto b = cascade_distribution(set, psi, 40000, 31, backward);
    EXPECT_EQ(a.expected.size(), b.expected.size());
    EXPECT_GT(stats::chi_square_two_sample(a.counts, b.counts).p_value, 0.001);
    EXPECT_GT(a.chi_square.p_value, 0.001);
    EXPECT_GT(b.chi_square.p_value, 0.001);
}

TEST(CascadeDistribution, ScaleInvariance) {
    const auto set = two_bit_set();
    const StateVector psi({0.4, 0.5, 0.3, std::sqrt(0.5)});
    const StateVector scaled(psi.amplitudes() * std::polar(3.0, 0.7));
    const auto a = cascade_distribution(set, psi, 5000, 40);
    const auto b = cascade_distribution(set, scaled, 5000, 40);
    EXPECT_EQ(a.counts, b.counts);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(a.expected[k], b.expected[k], 1e-12);
}

TEST(CascadeOptions, RejectsBadOrder) {
    CascadeOptions options;
    options.order = {0, 0};
    EXPECT_EQ(code_of([&] { run_cascade(two_bit_set(), StateVector({0.5, 0.5, 0.5, 0.5}), 1, options); }),
              ErrorCode::InvalidArgument);
}
