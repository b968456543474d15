#include "bornsim/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "bornsim/errors.hpp"
#include "bornsim/parallel.hpp"

namespace bornsim {

namespace {

const ScatteringProcess& born_process() {
    static const ScatteringProcess process = builtin_process(BuiltinProcess::Born);
    return process;
}

std::vector<std::size_t> resolve_order(const ProjectorSet& set, const std::vector<std::size_t>& order) {
    std::vector<std::size_t> resolved(set.size());
    std::iota(resolved.begin(), resolved.end(), std::size_t{0});
    if (order.empty()) return resolved;
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != resolved) {
        throw Error(ErrorCode::InvalidArgument, "cascade order must be a permutation of the projector indices");
    }
    return order;
}

// Record the canonical cascade writes for a joint eigenspace, read as a
// binary number with projector 0 most significant.
std::uint64_t record_value(std::uint64_t in_range_mask, std::size_t n_projectors) {
    std::uint64_t value = 0;
    for (std::size_t n = 0; n < n_projectors; ++n) {
        const std::uint64_t bit = (in_range_mask >> n) & 1U ? 0U : 1U;
        value = (value << 1) | bit;
    }
    return value;
}

struct CascadeTally {
    std::uint64_t runs = 0;
    std::uint64_t ties = 0;
    std::vector<std::uint64_t> counts;
    double max_telescoping_error = 0.0;

    CascadeTally& operator+=(const CascadeTally& other) {
        runs += other.runs;
        ties += other.ties;
        if (counts.size() < other.counts.size()) counts.resize(other.counts.size());
        for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
        max_telescoping_error = std::max(max_telescoping_error, other.max_telescoping_error);
        return *this;
    }
};

}  // namespace

ProjectorSet::ProjectorSet(std::size_t dim, std::vector<Matrix> projectors)
    : dim_(dim), projectors_(std::move(projectors)) {
    if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "projector set needs dim >= 1");
    for (std::size_t n = 0; n < projectors_.size(); ++n) {
        const auto d = static_cast<Eigen::Index>(dim_);
        if (projectors_[n].rows() != d || projectors_[n].cols() != d) {
            throw Error(ErrorCode::InvalidArgument, "projector " + std::to_string(n) + " is not " +
                                                        std::to_string(dim_) + "x" + std::to_string(dim_));
        }
    }
}

Matrix ProjectorSet::complement(std::size_t n) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    return Matrix::Identity(d, d) - projector(n);
}

long CompletenessReport::basis_index_for(std::uint64_t in_range_mask) const {
    auto it = std::find(in_range_masks.begin(), in_range_masks.end(), in_range_mask);
    return it == in_range_masks.end() ? -1 : static_cast<long>(it - in_range_masks.begin());
}

CompletenessReport validate(const ProjectorSet& set) {
    const std::size_t count = set.size();
    if (count > kMaxProjectors) {
        throw Error(ErrorCode::InvalidArgument, "at most 30 projectors are supported");
    }
    for (std::size_t n = 0; n < count; ++n) {
        const Matrix& p = set.projector(n);
        if ((p - p.adjoint()).norm() > kProjectorTolerance) {
            throw Error(ErrorCode::NotIdempotent, "projector " + std::to_string(n) + " is not Hermitian");
        }
        const double defect = (p * p - p).norm();
        if (defect > kProjectorTolerance) {
            throw Error(ErrorCode::NotIdempotent,
                        "projector " + std::to_string(n) + ": |P^2 - P| = " + std::to_string(defect));
        }
    }
    for (std::size_t m = 0; m < count; ++m) {
        for (std::size_t n = m + 1; n < count; ++n) {
            const double commutator =
                (set.projector(m) * set.projector(n) - set.projector(n) * set.projector(m)).norm();
            if (commutator > kProjectorTolerance) {
                throw Error(ErrorCode::NotCommuting, "projectors " + std::to_string(m) + " and " +
                                                         std::to_string(n) + ": |[P, Q]| = " +
                                                         std::to_string(commutator));
            }
        }
    }

    // sum_n 2^n P_n has eigenvalue sum_{n in I1} 2^n on each joint
    // eigenspace, so one Hermitian diagonalization separates all of them.
    const auto d = static_cast<Eigen::Index>(set.dim());
    Matrix combined = Matrix::Zero(d, d);
    for (std::size_t n = 0; n < count; ++n) combined += std::ldexp(1.0, static_cast<int>(n)) * set.projector(n);
    combined = (combined + combined.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(combined);

    std::map<std::uint64_t, std::vector<Eigen::Index>> spaces;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double value = solver.eigenvalues()(i);
        const double rounded = std::round(value);
        if (std::abs(value - rounded) > 1e-6 || rounded < 0.0) {
            throw Error(ErrorCode::NotCommuting, "joint eigenvalue " + std::to_string(value) + " is not a sign pattern");
        }
        spaces[static_cast<std::uint64_t>(rounded)].push_back(i);
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> ordered;  // (record value, mask)
    for (const auto& [mask, columns] : spaces) ordered.emplace_back(record_value(mask, count), mask);
    std::sort(ordered.begin(), ordered.end());

    CompletenessReport report;
    report.complete = true;
    for (const auto& [value, mask] : ordered) {
        const auto& columns = spaces.at(mask);
        report.in_range_masks.push_back(mask);
        report.joint_ranks.push_back(columns.size());
        std::vector<std::size_t> in_range;
        std::vector<std::size_t> in_complement;
        for (std::size_t n = 0; n < count; ++n) ((mask >> n) & 1U ? in_range : in_complement).push_back(n);
        report.in_range.push_back(std::move(in_range));
        report.in_complement.push_back(std::move(in_complement));
        if (columns.size() != 1) report.complete = false;
    }

    if (report.complete) {
        for (std::size_t k = 0; k < report.in_range_masks.size(); ++k) {
            const Eigen::Index column = spaces.at(report.in_range_masks[k]).front();
            Vector v = fix_global_phase(solver.eigenvectors().col(column));
            Matrix witness = Matrix::Identity(d, d);
            for (std::size_t n : report.in_range[k]) witness = witness * set.projector(n);
            for (std::size_t n : report.in_complement[k]) witness = witness * set.complement(n);
            report.witness_error = std::max(report.witness_error, (witness - v * v.adjoint()).norm());
            report.special_basis.push_back(std::move(v));
        }
        if (report.witness_error > kWitnessTolerance) report.complete = false;
    }

    // Independent: dropping any projector would merge two joint eigenspaces.
    report.independent = true;
    for (std::size_t n = 0; n < count && report.independent; ++n) {
        bool merges = false;
        for (std::uint64_t mask : report.in_range_masks) {
            if (report.basis_index_for(mask ^ (std::uint64_t{1} << n)) >= 0) {
                merges = true;
                break;
            }
        }
        report.independent = merges;
    }
    return report;
}

std::array<SplitBranch, 2> split(const ProjectorSet& set, std::size_t n, const StateVector& psi) {
    if (psi.dim() != set.dim()) throw Error(ErrorCode::InvalidArgument, "state and projector dimensions differ");
    Vector kept = set.projector(n) * psi.amplitudes();
    Vector rest = psi.amplitudes() - kept;
    return {SplitBranch{StateVector(std::move(kept)), 0}, SplitBranch{StateVector(std::move(rest)), 1}};
}

StageResult cascade_step(const ProjectorSet& set, std::size_t n, const StateVector& psi,
                         const PhotonState& photon) {
    const double total = psi.squared_norm();
    if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "cascade stage needs a nonzero state");
    auto branches = split(set, n, psi);
    const double kept = branches[0].state.squared_norm();
    const double rest = branches[1].state.squared_norm();

    const QubitState record_qubit(std::sqrt(kept), std::sqrt(rest));
    const LocalOutcome outcome = local_outcome(born_process(), photon, record_qubit);
    const std::size_t chosen = outcome.outcome == Outcome::Zero ? 0 : 1;
    const double probability = (chosen == 0 ? kept : rest) / total;
    return {std::move(branches[chosen].state), branches[chosen].bit, probability};
}

CascadeOutcome run_cascade(const ProjectorSet& set, const CompletenessReport& report, const StateVector& psi,
                           RngStream& rng, const CascadeOptions& options) {
    if (!report.complete) {
        throw Error(ErrorCode::IncompleteSet, "cascade needs a complete projector set");
    }
    const std::vector<std::size_t> order = resolve_order(set, options.order);

    CascadeOutcome out{0, {}, {}, 0.0, 1.0, psi.amplitudes()};
    StateVector state = psi;
    std::uint64_t in_range_mask = 0;
    const auto stage = [&](std::size_t n) {
        const PhotonState photon = sample_photon(rng);
        StageResult result = cascade_step(set, n, state, photon);
        out.qubit_record.push_back(result.bit);
        out.stage_projectors.push_back(n);
        out.realized_probability *= result.stage_probability;
        state = std::move(result.state);
        return result.bit;
    };
    for (std::size_t n : order) {
        if (stage(n) == 0) in_range_mask |= std::uint64_t{1} << n;
    }
    for (std::size_t extra = 0; extra < options.extra_stages && set.size() > 0; ++extra) {
        stage(static_cast<std::size_t>(rng() % set.size()));
    }

    const long k = report.basis_index_for(in_range_mask);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "cascade ended outside every joint eigenspace");
    out.basis_index = static_cast<std::size_t>(k);
    out.probability_weight =
        std::norm(report.special_basis[out.basis_index].dot(psi.amplitudes())) / psi.squared_norm();
    out.final_state = state.amplitudes();
    return out;
}

CascadeOutcome run_cascade(const ProjectorSet& set, const StateVector& psi, std::uint64_t seed,
                           const CascadeOptions& options) {
    const CompletenessReport report = validate(set);
    RngStream rng(seed);
    return run_cascade(set, report, psi, rng, options);
}

std::vector<double> analytic_weights(const ProjectorSet& set, const CompletenessReport& report,
                                     const StateVector& psi, const std::vector<std::size_t>& order) {
    const std::vector<std::size_t> resolved = resolve_order(set, order);
    std::vector<double> weights;
    for (std::size_t k = 0; k < report.in_range_masks.size(); ++k) {
        Vector v = psi.amplitudes();
        for (std::size_t n : resolved) {
            if ((report.in_range_masks[k] >> n) & 1U) {
                v = set.projector(n) * v;
            } else {
                v = v - set.projector(n) * v;
            }
        }
        weights.push_back(v.squaredNorm() / psi.squared_norm());
    }
    return weights;
}

std::vector<double> CascadeDistribution::frequencies() const {
    std::uint64_t decided = 0;
    for (auto c : counts) decided += c;
    std::vector<double> out;
    for (auto c : counts) out.push_back(decided > 0 ? static_cast<double>(c) / static_cast<double>(decided) : 0.0);
    return out;
}

CascadeDistribution cascade_distribution(const ProjectorSet& set, const StateVector& psi, std::uint64_t n_runs,
                                         std::uint64_t seed, const CascadeOptions& options) {
    if (n_runs == 0) throw Error(ErrorCode::InvalidArgument, "n_runs must be at least 1");
    const CompletenessReport report = validate(set);
    if (!report.complete) throw Error(ErrorCode::IncompleteSet, "cascade needs a complete projector set");
    if (psi.squared_norm() <= 0.0) throw Error(ErrorCode::InvalidArgument, "cascade needs a nonzero state");
    resolve_order(set, options.order);
    const std::size_t outcomes = report.special_basis.size();

    const CascadeTally tally =
        parallel_accumulate<CascadeTally>(n_runs, [&](std::uint64_t begin, std::uint64_t end) {
            CascadeTally local;
            local.counts.assign(outcomes, 0);
            for (std::uint64_t run = begin; run < end; ++run) {
                ++local.runs;
                RngStream rng(seed, run);
                try {
                    const CascadeOutcome outcome = run_cascade(set, report, psi, rng, options);
                    ++local.counts[outcome.basis_index];
                    local.max_telescoping_error =
                        std::max(local.max_telescoping_error,
                                 std::abs(outcome.realized_probability - outcome.probability_weight));
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::TieOutcome) throw;
                    ++local.ties;
                }
            }
            return local;
        });

    CascadeDistribution out;
    out.runs = tally.runs;
    out.ties = tally.ties;
    out.counts = tally.counts;
    out.max_telescoping_error = tally.max_telescoping_error;
    for (const auto& basis_vector : report.special_basis) {
        out.expected.push_back(std::norm(basis_vector.dot(psi.amplitudes())) / psi.squared_norm());
    }
    out.chi_square = stats::chi_square_gof(out.counts, out.expected);
    return out;
}

}  // namespace bornsim
