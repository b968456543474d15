#include "bornsim/fock.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "bornsim/errors.hpp"

namespace bornsim {

namespace {

unsigned total(const Occupations& n) { return std::accumulate(n.begin(), n.end(), 0u); }

// Appends every occupation list of `modes` entries summing to `particles`,
// in descending lexicographic order.
void enumerate_fixed_total(std::size_t modes, unsigned particles, Occupations& prefix,
                           std::vector<Occupations>& out) {
    if (prefix.size() + 1 == modes) {
        prefix.push_back(particles);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (unsigned k = particles + 1; k-- > 0;) {
        prefix.push_back(k);
        enumerate_fixed_total(modes, particles - k, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

AccessibilityPartition::AccessibilityPartition(std::size_t single_particle_dim,
                                               std::vector<std::size_t> accessible)
    : single_particle_dim_(single_particle_dim), accessible_(std::move(accessible)) {
    if (single_particle_dim_ == 0) {
        throw Error(ErrorCode::InvalidArgument, "single_particle_dim must be positive");
    }
    std::sort(accessible_.begin(), accessible_.end());
    if (std::adjacent_find(accessible_.begin(), accessible_.end()) != accessible_.end()) {
        throw Error(ErrorCode::InvalidArgument, "accessible set lists a mode twice");
    }
    if (!accessible_.empty() && accessible_.back() >= single_particle_dim_) {
        throw Error(ErrorCode::InvalidArgument,
                    "accessible mode " + std::to_string(accessible_.back()) + " out of range");
    }
    for (std::size_t i = 0; i < single_particle_dim_; ++i) {
        if (!std::binary_search(accessible_.begin(), accessible_.end(), i)) inaccessible_.push_back(i);
    }
}

AccessibilityPartition AccessibilityPartition::all_accessible(std::size_t single_particle_dim) {
    std::vector<std::size_t> modes(single_particle_dim);
    std::iota(modes.begin(), modes.end(), std::size_t{0});
    return AccessibilityPartition(single_particle_dim, std::move(modes));
}

bool AccessibilityPartition::is_accessible(std::size_t mode) const {
    return std::binary_search(accessible_.begin(), accessible_.end(), mode);
}

AccessibilityPartition partition_from_radius(std::span<const double> grid_radii, double local_radius,
                                             double signal_speed, double observation_time) {
    if (local_radius < 0.0 || signal_speed < 0.0 || observation_time < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "r_l, c and T must be non-negative");
    }
    const double horizon = local_radius + signal_speed * observation_time;
    std::vector<std::size_t> accessible;
    for (std::size_t i = 0; i < grid_radii.size(); ++i) {
        if (grid_radii[i] < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "grid radius must be non-negative");
        }
        if (grid_radii[i] <= horizon) accessible.push_back(i);
    }
    return AccessibilityPartition(grid_radii.size(), std::move(accessible));
}

FockSpace::FockSpace(AccessibilityPartition partition, unsigned max_total)
    : partition_(std::move(partition)), max_total_(max_total) {
    const std::size_t modes = partition_.accessible().size();
    if (modes == 0) {
        accessible_basis_.push_back({});
    } else {
        Occupations prefix;
        for (unsigned n = 0; n <= max_total_; ++n) enumerate_fixed_total(modes, n, prefix, accessible_basis_);
    }
    for (std::size_t i = 0; i < accessible_basis_.size(); ++i) {
        accessible_lookup_.emplace(accessible_basis_[i], i);
    }
}

std::shared_ptr<const FockSpace> FockSpace::make(AccessibilityPartition partition, unsigned max_total) {
    return std::make_shared<const FockSpace>(std::move(partition), max_total);
}

std::size_t FockSpace::accessible_index(const Occupations& accessible_occupations) const {
    auto it = accessible_lookup_.find(accessible_occupations);
    if (it == accessible_lookup_.end()) {
        throw Error(ErrorCode::InvalidArgument, "occupation list is not in the accessible sector");
    }
    return it->second;
}

std::pair<Occupations, Occupations> FockSpace::split(const Occupations& occupations) const {
    Occupations accessible;
    Occupations inaccessible;
    accessible.reserve(partition_.accessible().size());
    inaccessible.reserve(partition_.inaccessible().size());
    for (std::size_t mode : partition_.accessible()) accessible.push_back(occupations[mode]);
    for (std::size_t mode : partition_.inaccessible()) inaccessible.push_back(occupations[mode]);
    return {std::move(accessible), std::move(inaccessible)};
}

Occupations FockSpace::join(const Occupations& accessible_occupations,
                            const Occupations& inaccessible_occupations) const {
    if (accessible_occupations.size() != partition_.accessible().size() ||
        inaccessible_occupations.size() != partition_.inaccessible().size()) {
        throw Error(ErrorCode::InvalidArgument, "sector occupation lists do not match the partition");
    }
    Occupations out(single_particle_dim(), 0);
    for (std::size_t k = 0; k < accessible_occupations.size(); ++k) {
        out[partition_.accessible()[k]] = accessible_occupations[k];
    }
    for (std::size_t k = 0; k < inaccessible_occupations.size(); ++k) {
        out[partition_.inaccessible()[k]] = inaccessible_occupations[k];
    }
    return out;
}

void FockSpace::check(const Occupations& occupations) const {
    if (occupations.size() != single_particle_dim()) {
        throw Error(ErrorCode::InvalidArgument,
                    "occupation list has " + std::to_string(occupations.size()) + " entries, expected " +
                        std::to_string(single_particle_dim()));
    }
    if (total(occupations) > max_total_) {
        throw Error(ErrorCode::InvalidArgument,
                    "total particle number exceeds max_total " + std::to_string(max_total_));
    }
}

FockStateVector::FockStateVector(std::shared_ptr<const FockSpace> space) : space_(std::move(space)) {
    if (!space_) throw Error(ErrorCode::InvalidArgument, "FockStateVector needs a space");
}

FockStateVector& FockStateVector::add(const Occupations& occupations, Complex amplitude) {
    space_->check(occupations);
    auto [it, inserted] = terms_.try_emplace(occupations, amplitude);
    if (!inserted) it->second += amplitude;
    if (std::abs(it->second) <= kPruneThreshold) terms_.erase(it);
    return *this;
}

double FockStateVector::squared_norm() const {
    double sum = 0.0;
    for (const auto& [n, c] : terms_) sum += std::norm(c);
    return sum;
}

FockStateVector& FockStateVector::operator+=(const FockStateVector& other) {
    if (!(*space_ == other.space())) {
        throw Error(ErrorCode::InvalidArgument, "cannot add states from different Fock spaces");
    }
    for (const auto& [n, c] : other.terms_) add(n, c);
    return *this;
}

FockStateVector& FockStateVector::operator*=(Complex scale) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= scale;
        it = std::abs(it->second) <= kPruneThreshold ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

StrippedState strip(const FockStateVector& psi) {
    const FockSpace& space = psi.space();
    const auto dim = static_cast<Eigen::Index>(space.accessible_dim());

    // One accessible-sector vector per inaccessible occupation list.
    std::map<Occupations, Vector> groups;
    for (const auto& [occupations, amplitude] : psi.terms()) {
        auto [accessible, inaccessible] = space.split(occupations);
        auto [it, inserted] = groups.try_emplace(std::move(inaccessible));
        if (inserted) it->second = Vector::Zero(dim);
        it->second(static_cast<Eigen::Index>(space.accessible_index(accessible))) += amplitude;
    }

    Matrix op = Matrix::Zero(dim, dim);
    for (const auto& [inaccessible, v] : groups) op.noalias() += v * v.adjoint();
    return {psi.space_ptr(), NonNegativeOperator::trusted(std::move(op))};
}

StateVector strip_normalized(const FockStateVector& psi, double tie_tolerance) {
    const StrippedState stripped = strip(psi);
    return StateVector(dominant_eigenprojection(stripped.op, tie_tolerance).eigenvector);
}

}  // namespace bornsim
