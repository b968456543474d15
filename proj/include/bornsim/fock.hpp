#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "bornsim/statespace.hpp"

namespace bornsim {

/// Particle count per single-particle basis index.
using Occupations = std::vector<unsigned>;

/// Split of the single-particle basis {0, ..., dim-1} into modes the local
/// observer can reach and modes beyond the observation horizon.
class AccessibilityPartition {
public:
    AccessibilityPartition(std::size_t single_particle_dim, std::vector<std::size_t> accessible);

    static AccessibilityPartition all_accessible(std::size_t single_particle_dim);

    std::size_t single_particle_dim() const { return single_particle_dim_; }
    /// Ascending.
    const std::vector<std::size_t>& accessible() const { return accessible_; }
    /// Ascending.
    const std::vector<std::size_t>& inaccessible() const { return inaccessible_; }
    bool is_accessible(std::size_t mode) const;

    bool operator==(const AccessibilityPartition&) const = default;

private:
    std::size_t single_particle_dim_;
    std::vector<std::size_t> accessible_;
    std::vector<std::size_t> inaccessible_;
};

/// Mode i is accessible iff grid_radii[i] <= r_l + c * T.
AccessibilityPartition partition_from_radius(std::span<const double> grid_radii, double local_radius,
                                             double signal_speed, double observation_time);

/// Occupation-number space truncated at max_total particles, with its
/// accessible sector (inaccessible occupations all zero) enumerated once.
///
/// Accessible basis order: total particle number ascending, then occupation
/// lists over the accessible modes (ascending mode index) in descending
/// lexicographic order. Index 0 is the vacuum.
class FockSpace {
public:
    static constexpr unsigned kDefaultMaxTotal = 3;

    explicit FockSpace(AccessibilityPartition partition, unsigned max_total = kDefaultMaxTotal);

    static std::shared_ptr<const FockSpace> make(AccessibilityPartition partition,
                                                 unsigned max_total = kDefaultMaxTotal);

    const AccessibilityPartition& partition() const { return partition_; }
    std::size_t single_particle_dim() const { return partition_.single_particle_dim(); }
    unsigned max_total() const { return max_total_; }

    std::size_t accessible_dim() const { return accessible_basis_.size(); }
    const std::vector<Occupations>& accessible_basis() const { return accessible_basis_; }
    /// Position of an accessible occupation list (length = number of accessible modes).
    std::size_t accessible_index(const Occupations& accessible_occupations) const;

    /// (n_a, n_i) for a full occupation list.
    std::pair<Occupations, Occupations> split(const Occupations& occupations) const;
    Occupations join(const Occupations& accessible_occupations,
                     const Occupations& inaccessible_occupations) const;

    /// Throws InvalidArgument on wrong length or a total above max_total.
    void check(const Occupations& occupations) const;

    bool operator==(const FockSpace& other) const {
        return partition_ == other.partition_ && max_total_ == other.max_total_;
    }

private:
    AccessibilityPartition partition_;
    unsigned max_total_;
    std::vector<Occupations> accessible_basis_;
    std::map<Occupations, std::size_t> accessible_lookup_;
};

/// Sparse superposition of occupation-number basis states.
class FockStateVector {
public:
    static constexpr double kPruneThreshold = 1e-15;

    explicit FockStateVector(std::shared_ptr<const FockSpace> space);

    const FockSpace& space() const { return *space_; }
    const std::shared_ptr<const FockSpace>& space_ptr() const { return space_; }
    const std::map<Occupations, Complex>& terms() const { return terms_; }

    /// Adds amplitude to the coefficient of |occupations>; pruned if the
    /// resulting coefficient falls to |c| <= 1e-15.
    FockStateVector& add(const Occupations& occupations, Complex amplitude);

    double squared_norm() const;

    FockStateVector& operator+=(const FockStateVector& other);
    friend FockStateVector operator+(FockStateVector lhs, const FockStateVector& rhs) {
        lhs += rhs;
        return lhs;
    }
    FockStateVector& operator*=(Complex scale);

private:
    std::shared_ptr<const FockSpace> space_;
    std::map<Occupations, Complex> terms_;
};

/// Reduced operator on the accessible sector.
struct StrippedState {
    std::shared_ptr<const FockSpace> space;
    NonNegativeOperator op;
};

/// Terms sharing an inaccessible occupation list add coherently; distinct
/// inaccessible lists add as separate rank-one operators.
StrippedState strip(const FockStateVector& psi);

/// Unit eigenvector of the dominant eigenvalue of strip(psi), first nonzero
/// amplitude real positive. Propagates DegenerateDominant and ZeroOperator.
StateVector strip_normalized(const FockStateVector& psi, double tie_tolerance = kDefaultTieTolerance);

}  // namespace bornsim
