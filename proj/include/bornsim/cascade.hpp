#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bornsim/rng.hpp"
#include "bornsim/scattering.hpp"
#include "bornsim/statespace.hpp"
#include "bornsim/stats.hpp"

namespace bornsim {

inline constexpr double kProjectorTolerance = 1e-10;
inline constexpr double kWitnessTolerance = 1e-9;
inline constexpr std::size_t kMaxProjectors = 30;

/// Family of commuting orthogonal projectors on a dim-dimensional space.
/// Complements 1 - P are derived on demand.
class ProjectorSet {
public:
    ProjectorSet(std::size_t dim, std::vector<Matrix> projectors);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return projectors_.size(); }
    const std::vector<Matrix>& projectors() const { return projectors_; }
    const Matrix& projector(std::size_t n) const { return projectors_.at(n); }
    Matrix complement(std::size_t n) const;

private:
    std::size_t dim_;
    std::vector<Matrix> projectors_;
};

struct CompletenessReport {
    bool complete = false;
    bool independent = false;
    /// Joint eigenvectors, one per special basis index k (when complete).
    /// Ordered by the qubit record the cascade writes for them, read as a
    /// binary number with projector 0 most significant.
    std::vector<Vector> special_basis;
    /// in_range[k] = I1(k) (projectors with P|k> = |k>),
    /// in_complement[k] = I2(k) (projectors with P|k> = 0).
    std::vector<std::vector<std::size_t>> in_range;
    std::vector<std::vector<std::size_t>> in_complement;
    /// Rank of each non-empty joint eigenspace, listed in the same order.
    std::vector<std::size_t> joint_ranks;
    /// Bit n set iff n in I1, per joint eigenspace.
    std::vector<std::uint64_t> in_range_masks;
    /// Largest deviation of a witness product from |k><k|.
    double witness_error = 0.0;

    /// Position of the joint eigenspace with this mask, or -1.
    long basis_index_for(std::uint64_t in_range_mask) const;
};

/// Throws NotIdempotent or NotCommuting when the family violates its
/// invariants, InvalidArgument for more than 30 projectors.
CompletenessReport validate(const ProjectorSet& set);

struct SplitBranch {
    StateVector state;
    std::uint8_t bit;
};

/// (P_n psi, 0) and ((1 - P_n) psi, 1).
std::array<SplitBranch, 2> split(const ProjectorSet& set, std::size_t n, const StateVector& psi);

struct StageResult {
    StateVector state;
    std::uint8_t bit;
    /// <psi|P|psi>/<psi|psi> for the selected projector (P or its complement).
    double stage_probability;
};

/// Split on projector n, then Born-scatter the fresh record qubit whose
/// amplitudes are the two branch norms. Throws TieOutcome.
StageResult cascade_step(const ProjectorSet& set, std::size_t n, const StateVector& psi,
                         const PhotonState& photon);

struct CascadeOptions {
    /// Projector application order; empty means 0, 1, ..., N-1.
    std::vector<std::size_t> order;
    /// Extra stages on uniformly drawn projectors after the full pass.
    std::size_t extra_stages = 0;
};

struct CascadeOutcome {
    std::size_t basis_index;
    /// One bit per stage, in order of application.
    std::vector<std::uint8_t> qubit_record;
    /// Projector applied at each stage.
    std::vector<std::size_t> stage_projectors;
    /// |<k|psi>|^2 / <psi|psi>.
    double probability_weight;
    /// Product of the realized stage probabilities.
    double realized_probability;
    Vector final_state;
};

/// One full cascade; draws one photon per stage from the stream.
/// Throws IncompleteSet if the report is not complete.
CascadeOutcome run_cascade(const ProjectorSet& set, const CompletenessReport& report, const StateVector& psi,
                           RngStream& rng, const CascadeOptions& options = {});

CascadeOutcome run_cascade(const ProjectorSet& set, const StateVector& psi, std::uint64_t seed,
                           const CascadeOptions& options = {});

/// |<k|psi>|^2/<psi|psi> computed by applying the witness projectors for k
/// in the given order (canonical order if empty).
std::vector<double> analytic_weights(const ProjectorSet& set, const CompletenessReport& report,
                                     const StateVector& psi, const std::vector<std::size_t>& order = {});

struct CascadeDistribution {
    std::uint64_t runs = 0;
    std::uint64_t ties = 0;
    std::vector<std::uint64_t> counts;
    std::vector<double> expected;
    stats::ChiSquareResult chi_square;
    /// Largest |realized_probability - probability_weight| seen.
    double max_telescoping_error = 0.0;

    std::vector<double> frequencies() const;
};

/// Run r uses RngStream(seed, r); tied runs are counted and excluded.
CascadeDistribution cascade_distribution(const ProjectorSet& set, const StateVector& psi, std::uint64_t n_runs,
                                         std::uint64_t seed, const CascadeOptions& options = {});

}  // namespace bornsim
