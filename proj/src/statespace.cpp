#include "bornsim/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bornsim/errors.hpp"

namespace bornsim {

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) {
        throw Error(ErrorCode::InvalidArgument, "state vector needs dim >= 1");
    }
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(Vector::Map(amplitudes.begin(), static_cast<Eigen::Index>(amplitudes.size()))) {}

bool StateVector::is_normalized() const {
    return std::abs(squared_norm() - 1.0) <= kNormalizationTolerance;
}

NonNegativeOperator::NonNegativeOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw Error(ErrorCode::InvalidArgument, "operator must be a non-empty square matrix");
    }
    const double asymmetry = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (asymmetry > kHermitianTolerance) {
        throw Error(ErrorCode::InvalidArgument,
                    "operator is not Hermitian (max deviation " + std::to_string(asymmetry) + ")");
    }
    // Symmetrize away the sub-tolerance noise before diagonalizing.
    entries_ = (entries_ + entries_.adjoint()) * 0.5;
    if (!entries_.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "operator has non-finite entries");
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    const Eigen::VectorXd& values = solver.eigenvalues();
    if (values.minCoeff() < -kPsdTolerance) {
        throw Error(ErrorCode::InvalidArgument,
                    "operator has negative eigenvalue " + std::to_string(values.minCoeff()));
    }
    if (values.minCoeff() < 0.0) {
        const Eigen::VectorXd clamped = values.cwiseMax(0.0);
        entries_ = solver.eigenvectors() * clamped.cast<Complex>().asDiagonal() *
                   solver.eigenvectors().adjoint();
    }
}

NonNegativeOperator NonNegativeOperator::trusted(Matrix entries) {
    return NonNegativeOperator(std::move(entries), TrustedTag{});
}

std::vector<std::size_t> EigenSignature::dimensions() const {
    std::vector<std::size_t> out;
    out.reserve(subspaces_.size());
    for (const auto& s : subspaces_) out.push_back(s.dimension);
    return out;
}

std::vector<double> EigenSignature::eigenvalues() const {
    std::vector<double> out;
    out.reserve(subspaces_.size());
    for (const auto& s : subspaces_) out.push_back(s.eigenvalue);
    return out;
}

bool EigenSignature::equivalent(const EigenSignature& other, double tolerance) const {
    if (dimensions() != other.dimensions()) return false;
    for (std::size_t i = 0; i < subspaces_.size(); ++i) {
        const Matrix& p = subspaces_[i].projector;
        const Matrix& q = other.subspaces_[i].projector;
        if (p.rows() != q.rows() || (p - q).norm() > tolerance) return false;
    }
    return true;
}

NonNegativeOperator embed_pure(const StateVector& v) {
    const Vector& a = v.amplitudes();
    return NonNegativeOperator::trusted(a * a.adjoint());
}

StateVector tensor(const StateVector& v1, const StateVector& v2) {
    const Vector& a = v1.amplitudes();
    const Vector& b = v2.amplitudes();
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return StateVector(std::move(out));
}

DominantProjection dominant_eigenprojection(const NonNegativeOperator& op, double tie_tolerance) {
    if (op.trace() <= kZeroTraceThreshold) {
        throw Error(ErrorCode::ZeroOperator, "trace " + std::to_string(op.trace()) + " is not positive");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries());
    const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
    const Eigen::Index top = values.size() - 1;
    const double largest = values(top);
    if (top > 0 && largest - values(top - 1) <= tie_tolerance * largest) {
        throw Error(ErrorCode::DegenerateDominant,
                    "largest eigenvalues " + std::to_string(largest) + " and " +
                        std::to_string(values(top - 1)) + " are tied");
    }
    Vector v = fix_global_phase(solver.eigenvectors().col(top));
    Matrix projector = v * v.adjoint();
    return {largest, NonNegativeOperator::trusted(std::move(projector)), std::move(v)};
}

EigenSignature eigen_signature(const NonNegativeOperator& op, double cluster_tolerance) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries());
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Matrix& vectors = solver.eigenvectors();

    std::vector<EigenSubspace> subspaces;
    Eigen::Index i = values.size() - 1;
    while (i >= 0 && values(i) > kZeroTraceThreshold) {
        // Grow the cluster downwards while the relative gap to its head is small.
        const double head = values(i);
        Eigen::Index j = i;
        while (j - 1 >= 0 && head - values(j - 1) <= cluster_tolerance * head) --j;
        const Eigen::Index count = i - j + 1;
        const Matrix block = vectors.middleCols(j, count);
        subspaces.push_back({static_cast<std::size_t>(count), values.segment(j, count).mean(),
                             block * block.adjoint()});
        i = j - 1;
    }
    return EigenSignature(std::move(subspaces));
}

Vector fix_global_phase(Vector v, double threshold) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > threshold) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            break;
        }
    }
    return v;
}

}  // namespace bornsim
