#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bornsim/scattering.hpp"
#include "bornsim/stats.hpp"

namespace bornsim {

/// One reconstructable branch: unnormalized eigenvalue product and the
/// outcomes held in memory, oldest first (0 or 1 per event).
struct Branch {
    double weight = 1.0;
    std::vector<std::uint8_t> record;
};

/// All branches after event_count recorded Born scattering events. Memory
/// qubits keep branches orthogonal, so the stripped state is diagonal in
/// them and a flat (weight, record) list is a faithful representation.
struct BranchTree {
    std::vector<Branch> branches{Branch{}};
    std::size_t event_count = 0;

    double total_weight() const;
};

/// Every branch (w, rec) spawns (w * l0, rec + [0]) and (w * l1, rec + [1])
/// where (l0, l1) are the Born stripped weights of (photon, preparation).
/// The same physical photon hits every branch.
BranchTree born_event(const BranchTree& tree, const QubitState& preparation, const PhotonState& photon);

/// Variant with one photon per branch (photons[i] hits tree.branches[i]).
BranchTree born_event(const BranchTree& tree, const QubitState& preparation,
                      std::span<const PhotonState> photons);

/// Branch of maximal weight. Throws DegenerateDominant if the two largest
/// weights agree within tie_tolerance relative.
const Branch& dominant_history(const BranchTree& tree, double tie_tolerance = 1e-12);

struct SwitchReport {
    bool switched = false;
    /// First index where the records differ; set iff switched.
    std::optional<std::size_t> divergence_depth;
};

/// A switch means the new dominant record does not extend the old one.
SwitchReport detect_switch(const Branch& old_dominant, const Branch& new_dominant);

/// How the incoming photon of each event is shared between branches.
enum class PhotonSharing {
    /// One photon per event, common to all branches.
    PerEvent,
    /// An independent photon for every branch at every event.
    PerBranch,
};

struct HistoryOptions {
    PhotonSharing sharing = PhotonSharing::PerEvent;
};

inline constexpr std::size_t kMaxHistoryEvents = 20;

struct SwitchEvent {
    std::uint64_t run;
    std::size_t event;  // 0-based index of the event that caused the switch
    std::size_t divergence_depth;
};

struct HistoryStatistics {
    std::size_t n_events = 0;
    std::uint64_t n_runs = 0;
    /// Runs dropped because a dominant-branch tie occurred.
    std::uint64_t ties = 0;
    /// Indexed by the record read as a binary number, first event most significant.
    std::vector<std::uint64_t> record_counts;
    /// Born product probability of each record.
    std::vector<double> expected;
    stats::ChiSquareResult chi_square;
    /// switch_counts[t]: runs whose dominant record was rewritten by event t.
    std::vector<std::uint64_t> switch_counts;
    /// First few switches, for reporting.
    std::vector<SwitchEvent> switch_examples;

    std::uint64_t decided_runs() const { return n_runs - ties; }
    std::vector<double> switch_rates() const;
    std::uint64_t total_switches() const;
};

/// n_runs independent histories of n_events Born events on a freshly
/// prepared qubit each; run r draws from RngStream(seed, r).
HistoryStatistics run_history_experiment(const QubitState& preparation, std::size_t n_events,
                                         std::uint64_t n_runs, std::uint64_t seed,
                                         const HistoryOptions& options = {});

std::size_t record_index(std::span<const std::uint8_t> record);

}  // namespace bornsim
