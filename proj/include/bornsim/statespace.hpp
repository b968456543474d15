#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace bornsim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kZeroTraceThreshold = 1e-12;
inline constexpr double kDefaultTieTolerance = 1e-10;
inline constexpr double kDefaultClusterTolerance = 1e-9;

/// Complex amplitude vector on a finite-dimensional space.
class StateVector {
public:
    explicit StateVector(Vector amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes);

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

    double squared_norm() const { return amplitudes_.squaredNorm(); }
    bool is_normalized() const;

private:
    Vector amplitudes_;
};

/// Hermitian positive-semidefinite operator. Construction checks both
/// properties; eigenvalues in [-1e-10, 0) are clamped to zero.
class NonNegativeOperator {
public:
    explicit NonNegativeOperator(Matrix entries);

    /// Skips validation. Only for matrices that are PSD by construction
    /// (sums of outer products, products of commuting projectors).
    static NonNegativeOperator trusted(Matrix entries);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    double trace() const { return entries_.trace().real(); }

private:
    struct TrustedTag {};
    NonNegativeOperator(Matrix entries, TrustedTag) : entries_(std::move(entries)) {}

    Matrix entries_;
};

struct DominantProjection {
    double weight;
    NonNegativeOperator projector;
    /// Unit eigenvector spanning the (one-dimensional) dominant subspace.
    Vector eigenvector;
};

/// One eigenvalue cluster of an operator. The projector is what equality is
/// judged on; the eigenvalue is kept for diagnostics.
struct EigenSubspace {
    std::size_t dimension;
    double eigenvalue;
    Matrix projector;
};

/// Ordered list of orthogonal eigensubspaces (decreasing eigenvalue, null
/// space omitted). Two operators with equal signatures are related by a
/// spectrum-preserving bijection.
class EigenSignature {
public:
    explicit EigenSignature(std::vector<EigenSubspace> subspaces)
        : subspaces_(std::move(subspaces)) {}

    const std::vector<EigenSubspace>& subspaces() const { return subspaces_; }
    std::vector<std::size_t> dimensions() const;
    std::vector<double> eigenvalues() const;

    /// Compares dimension lists and pairwise projectors; eigenvalues are ignored.
    bool equivalent(const EigenSignature& other, double tolerance = 1e-8) const;

private:
    std::vector<EigenSubspace> subspaces_;
};

NonNegativeOperator embed_pure(const StateVector& v);

/// Kronecker product; amplitude (i * dim2 + j) = v1[i] * v2[j].
StateVector tensor(const StateVector& v1, const StateVector& v2);

/// Largest eigenvalue and the projector onto its eigenspace, i.e. the
/// normalized limit of op^k / tr(op^k) for k -> infinity.
///
/// Throws ZeroOperator when tr(op) <= 1e-12 and DegenerateDominant when the
/// two largest eigenvalues are within tie_tolerance * largest.
DominantProjection dominant_eigenprojection(const NonNegativeOperator& op,
                                            double tie_tolerance = kDefaultTieTolerance);

EigenSignature eigen_signature(const NonNegativeOperator& op,
                               double cluster_tolerance = kDefaultClusterTolerance);

/// Multiplies by a global phase so the first entry with modulus above
/// threshold is real and positive.
Vector fix_global_phase(Vector v, double threshold = 1e-12);

}  // namespace bornsim
