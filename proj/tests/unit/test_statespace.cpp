#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bornsim/errors.hpp"
#include "bornsim/statespace.hpp"
#include "support/oracles.hpp"

using namespace bornsim;
using namespace std::complex_literals;

namespace {

Matrix diag(std::initializer_list<double> values) {
    Eigen::VectorXcd d(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) d(i++) = v;
    return d.asDiagonal();
}

template <typename F>
ErrorCode error_code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(StateVector, RejectsEmpty) {
    EXPECT_EQ(error_code_of([] { StateVector(Vector(0)); }), ErrorCode::InvalidArgument);
}

TEST(StateVector, NormalizedFlagIsComputed) {
    EXPECT_TRUE(StateVector({1.0, 0.0}).is_normalized());
    EXPECT_FALSE(StateVector({1.0, 1.0}).is_normalized());
}

TEST(NonNegativeOperator, RejectsNonHermitian) {
    Matrix m(2, 2);
    m << 1.0, 0.5, 0.0, 1.0;
    EXPECT_EQ(error_code_of([&] { NonNegativeOperator{m}; }), ErrorCode::InvalidArgument);
}

TEST(NonNegativeOperator, RejectsNegativeEigenvalue) {
    EXPECT_EQ(error_code_of([] { NonNegativeOperator{diag({1.0, -1e-3})}; }), ErrorCode::InvalidArgument);
}

TEST(NonNegativeOperator, ClampsNoiseLevelNegativeEigenvalues) {
    const NonNegativeOperator op(diag({1.0, -1e-11}));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries());
    EXPECT_GE(solver.eigenvalues().minCoeff(), -1e-15);
}

TEST(EmbedPure, BasisVectorGivesProjector) {
    const auto op = embed_pure(StateVector({1.0, 0.0}));
    EXPECT_LT((op.entries() - diag({1.0, 0.0})).norm(), 1e-15);
}

TEST(EmbedPure, SymmetricSuperposition) {
    const double h = 1.0 / std::sqrt(2.0);
    const auto op = embed_pure(StateVector({h, h}));
    EXPECT_LT((op.entries() - Matrix::Constant(2, 2, 0.5)).norm(), 1e-15);
}

TEST(EmbedPure, ComplexAmplitudesMatchHandOuterProduct) {
    const auto op = embed_pure(StateVector({std::sqrt(0.7), std::sqrt(0.3) * 1i}));
    Matrix expected(2, 2);
    expected << 0.7, -1i * std::sqrt(0.21), 1i * std::sqrt(0.21), 0.3;
    EXPECT_LT((op.entries() - expected).norm(), 1e-15);
}

TEST(EmbedPure, HasRankOneAndTraceEqualToNorm) {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 20; ++trial) {
        Vector v(5);
        for (int i = 0; i < 5; ++i) v(i) = Complex(normal(gen), normal(gen));
        const auto op = embed_pure(StateVector(v));
        EXPECT_NEAR(op.trace(), v.squaredNorm(), 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries());
        EXPECT_LE(solver.eigenvalues()(3), 1e-10);
    }
}

TEST(Tensor, BasisCase) {
    const auto out = tensor(StateVector({1.0, 0.0}), StateVector({0.0, 1.0}));
    EXPECT_LT((out.amplitudes() - StateVector({0.0, 1.0, 0.0, 0.0}).amplitudes()).norm(), 1e-15);
}

TEST(Tensor, ScalarIdentity) {
    const StateVector v({0.3 + 0.1i, -0.2});
    EXPECT_LT((tensor(v, StateVector({1.0})).amplitudes() - v.amplitudes()).norm(), 1e-15);
}

TEST(Tensor, PlusMinusProduct) {
    const double h = 1.0 / std::sqrt(2.0);
    const auto out = tensor(StateVector({h, h}), StateVector({h, -h}));
    EXPECT_LT((out.amplitudes() - StateVector({0.5, -0.5, 0.5, -0.5}).amplitudes()).norm(), 1e-15);
}

TEST(Tensor, NormsMultiplyAndAssociativity) {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> normal;
    const auto random_state = [&](int dim) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v(i) = Complex(normal(gen), normal(gen));
        return StateVector(v);
    };
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_state(2), b = random_state(3), c = random_state(2);
        EXPECT_NEAR(tensor(a, b).squared_norm(), a.squared_norm() * b.squared_norm(),
                    1e-12 * a.squared_norm() * b.squared_norm());
        const auto left = tensor(tensor(a, b), c);
        const auto right = tensor(a, tensor(b, c));
        EXPECT_LT((left.amplitudes() - right.amplitudes()).norm(), 1e-12);
    }
}

TEST(DominantEigenprojection, DiagonalCase) {
    const auto result = dominant_eigenprojection(NonNegativeOperator(diag({0.7, 0.3})));
    EXPECT_NEAR(result.weight, 0.7, 1e-15);
    EXPECT_LT((result.projector.entries() - diag({1.0, 0.0})).norm(), 1e-15);
}

TEST(DominantEigenprojection, ExactTieIsDegenerate) {
    EXPECT_EQ(error_code_of([] { dominant_eigenprojection(NonNegativeOperator(diag({0.5, 0.5}))); }),
              ErrorCode::DegenerateDominant);
}

TEST(DominantEigenprojection, ZeroOperator) {
    EXPECT_EQ(error_code_of([] { dominant_eigenprojection(NonNegativeOperator(Matrix::Zero(3, 3))); }),
              ErrorCode::ZeroOperator);
}

TEST(DominantEigenprojection, OneDimensionalSpace) {
    const auto result = dominant_eigenprojection(NonNegativeOperator(diag({0.25})));
    EXPECT_NEAR(result.weight, 0.25, 1e-15);
    EXPECT_NEAR(result.projector.entries()(0, 0).real(), 1.0, 1e-15);
}

TEST(DominantEigenprojection, MatchesPowerLimitOn3x3Fixture) {
    std::mt19937_64 gen(2024);
    const Matrix phi = oracle::psd_with_spectrum({0.6, 0.3, 0.1}, gen);
    const auto result = dominant_eigenprojection(NonNegativeOperator(phi));
    const Matrix limit = oracle::power_limit_by_multiplication(phi, 200);
    EXPECT_LT((result.projector.entries() - limit).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(DominantEigenprojection, ProjectorIsIdempotent) {
    std::mt19937_64 gen(5);
    const Matrix phi = oracle::psd_with_spectrum({0.5, 0.2, 0.2, 0.1}, gen);
    const Matrix p = dominant_eigenprojection(NonNegativeOperator(phi)).projector.entries();
    EXPECT_LT((p * p - p).norm(), 1e-10);
}

TEST(DominantEigenprojection, EvolutionEquivariance) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix phi = oracle::psd_with_spectrum({1.0, 0.7, 0.4, 0.05}, gen);
        const Matrix u = oracle::random_unitary(4, gen);
        Matrix evolved = u * phi * u.adjoint();
        evolved = (evolved + evolved.adjoint()) * 0.5;
        const Matrix p = dominant_eigenprojection(NonNegativeOperator(phi)).projector.entries();
        const Matrix q = dominant_eigenprojection(NonNegativeOperator(evolved)).projector.entries();
        EXPECT_LT((q - u * p * u.adjoint()).norm(), 1e-8);
    }
}

TEST(EigenSignature, DegenerateTopCluster) {
    const auto sig = eigen_signature(NonNegativeOperator(diag({0.5, 0.5, 0.0})));
    EXPECT_EQ(sig.dimensions(), std::vector<std::size_t>({2}));
}

TEST(EigenSignature, ThreeDistinctEigenvalues) {
    const auto sig = eigen_signature(NonNegativeOperator(diag({0.6, 0.3, 0.1})));
    EXPECT_EQ(sig.dimensions(), std::vector<std::size_t>({1, 1, 1}));
    EXPECT_NEAR(sig.eigenvalues()[0], 0.6, 1e-15);
}

TEST(EigenSignature, ConjugationMapsProjectors) {
    std::mt19937_64 gen(3);
    const Matrix phi = diag({0.6, 0.3, 0.1});
    const Matrix u = oracle::random_unitary(3, gen);
    Matrix rotated = u * phi * u.adjoint();
    rotated = (rotated + rotated.adjoint()) * 0.5;

    const auto original = eigen_signature(NonNegativeOperator(phi));
    const auto conjugated = eigen_signature(NonNegativeOperator(rotated));
    ASSERT_EQ(original.dimensions(), conjugated.dimensions());
    for (std::size_t i = 0; i < original.subspaces().size(); ++i) {
        const Matrix mapped = u * original.subspaces()[i].projector * u.adjoint();
        EXPECT_LT((mapped - conjugated.subspaces()[i].projector).norm(), 1e-9);
    }
}

TEST(EigenSignature, PowerEquivalence) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix phi = oracle::psd_with_spectrum({0.5, 0.3, 0.15, 0.05, 0.0}, gen);
        const auto base = eigen_signature(NonNegativeOperator(phi));
        Matrix power = phi;
        for (int k = 2; k <= 4; ++k) {
            power = power * phi;
            Matrix sym = (power + power.adjoint()) * 0.5;
            const auto sig = eigen_signature(NonNegativeOperator(sym));
            EXPECT_TRUE(base.equivalent(sig)) << "k = " << k;
        }
    }
}

TEST(EigenSignature, EqualityIgnoresEigenvalues) {
    const auto a = eigen_signature(NonNegativeOperator(diag({0.6, 0.4})));
    const auto b = eigen_signature(NonNegativeOperator(diag({0.9, 0.1})));
    const auto c = eigen_signature(NonNegativeOperator(diag({0.4, 0.6})));
    EXPECT_TRUE(a.equivalent(b));
    EXPECT_FALSE(a.equivalent(c));
}
