#include "bornsim/branching.hpp"

#include <algorithm>
#include <string>

#include "bornsim/errors.hpp"
#include "bornsim/parallel.hpp"

namespace bornsim {

namespace {

const ScatteringProcess& born_process() {
    static const ScatteringProcess process = builtin_process(BuiltinProcess::Born);
    return process;
}

void spawn(const Branch& parent, const StrippedWeights& w, std::vector<Branch>& out) {
    Branch zero{parent.weight * w.zero, parent.record};
    zero.record.push_back(0);
    Branch one{parent.weight * w.one, parent.record};
    one.record.push_back(1);
    out.push_back(std::move(zero));
    out.push_back(std::move(one));
}

constexpr std::size_t kMaxSwitchExamples = 16;

struct HistoryTally {
    std::uint64_t runs = 0;
    std::uint64_t ties = 0;
    std::vector<std::uint64_t> record_counts;
    std::vector<std::uint64_t> switch_counts;
    std::vector<SwitchEvent> switch_examples;

    HistoryTally& operator+=(const HistoryTally& other) {
        runs += other.runs;
        ties += other.ties;
        if (record_counts.size() < other.record_counts.size()) record_counts.resize(other.record_counts.size());
        for (std::size_t i = 0; i < other.record_counts.size(); ++i) record_counts[i] += other.record_counts[i];
        if (switch_counts.size() < other.switch_counts.size()) switch_counts.resize(other.switch_counts.size());
        for (std::size_t i = 0; i < other.switch_counts.size(); ++i) switch_counts[i] += other.switch_counts[i];
        switch_examples.insert(switch_examples.end(), other.switch_examples.begin(), other.switch_examples.end());
        std::sort(switch_examples.begin(), switch_examples.end(),
                  [](const SwitchEvent& l, const SwitchEvent& r) { return l.run < r.run; });
        if (switch_examples.size() > kMaxSwitchExamples) switch_examples.resize(kMaxSwitchExamples);
        return *this;
    }
};

}  // namespace

double BranchTree::total_weight() const {
    double sum = 0.0;
    for (const auto& b : branches) sum += b.weight;
    return sum;
}

BranchTree born_event(const BranchTree& tree, const QubitState& preparation, const PhotonState& photon) {
    const StrippedWeights w = stripped_weights(born_process(), photon, preparation);
    BranchTree next;
    next.branches.clear();
    next.branches.reserve(2 * tree.branches.size());
    for (const auto& b : tree.branches) spawn(b, w, next.branches);
    next.event_count = tree.event_count + 1;
    return next;
}

BranchTree born_event(const BranchTree& tree, const QubitState& preparation,
                      std::span<const PhotonState> photons) {
    if (photons.size() != tree.branches.size()) {
        throw Error(ErrorCode::InvalidArgument, "need one photon per branch (" +
                                                    std::to_string(tree.branches.size()) + "), got " +
                                                    std::to_string(photons.size()));
    }
    BranchTree next;
    next.branches.clear();
    next.branches.reserve(2 * tree.branches.size());
    for (std::size_t i = 0; i < tree.branches.size(); ++i) {
        spawn(tree.branches[i], stripped_weights(born_process(), photons[i], preparation), next.branches);
    }
    next.event_count = tree.event_count + 1;
    return next;
}

const Branch& dominant_history(const BranchTree& tree, double tie_tolerance) {
    if (tree.branches.empty()) throw Error(ErrorCode::InvalidArgument, "empty branch tree");
    std::size_t best = 0;
    double runner_up = -1.0;
    for (std::size_t i = 1; i < tree.branches.size(); ++i) {
        const double w = tree.branches[i].weight;
        if (w > tree.branches[best].weight) {
            runner_up = tree.branches[best].weight;
            best = i;
        } else {
            runner_up = std::max(runner_up, w);
        }
    }
    const double top = tree.branches[best].weight;
    if (runner_up >= 0.0 && top - runner_up <= tie_tolerance * top) {
        throw Error(ErrorCode::DegenerateDominant,
                    "two branches share the largest weight " + std::to_string(top));
    }
    return tree.branches[best];
}

SwitchReport detect_switch(const Branch& old_dominant, const Branch& new_dominant) {
    if (new_dominant.record.size() < old_dominant.record.size()) {
        throw Error(ErrorCode::InvalidArgument, "new record is shorter than the old one");
    }
    const auto mismatch = std::mismatch(old_dominant.record.begin(), old_dominant.record.end(),
                                        new_dominant.record.begin());
    if (mismatch.first == old_dominant.record.end()) return {};
    return {true, static_cast<std::size_t>(mismatch.first - old_dominant.record.begin())};
}

std::size_t record_index(std::span<const std::uint8_t> record) {
    std::size_t index = 0;
    for (auto bit : record) index = (index << 1) | bit;
    return index;
}

std::vector<double> HistoryStatistics::switch_rates() const {
    std::vector<double> rates;
    const double runs = static_cast<double>(decided_runs());
    for (auto c : switch_counts) rates.push_back(runs > 0 ? static_cast<double>(c) / runs : 0.0);
    return rates;
}

std::uint64_t HistoryStatistics::total_switches() const {
    std::uint64_t sum = 0;
    for (auto c : switch_counts) sum += c;
    return sum;
}

HistoryStatistics run_history_experiment(const QubitState& preparation, std::size_t n_events,
                                         std::uint64_t n_runs, std::uint64_t seed,
                                         const HistoryOptions& options) {
    if (n_events == 0 || n_events > kMaxHistoryEvents) {
        throw Error(ErrorCode::InvalidArgument, "n_events must be in [1, 20]");
    }
    if (n_runs == 0) throw Error(ErrorCode::InvalidArgument, "n_runs must be at least 1");
    const std::size_t n_records = std::size_t{1} << n_events;

    const HistoryTally tally = parallel_accumulate<HistoryTally>(n_runs, [&](std::uint64_t begin,
                                                                             std::uint64_t end) {
        HistoryTally local;
        local.record_counts.assign(n_records, 0);
        local.switch_counts.assign(n_events, 0);
        std::vector<PhotonState> photons;
        for (std::uint64_t run = begin; run < end; ++run) {
            ++local.runs;
            RngStream rng(seed, run);
            BranchTree tree;
            Branch previous;
            std::vector<SwitchEvent> switches;
            bool tied = false;
            for (std::size_t event = 0; event < n_events; ++event) {
                if (options.sharing == PhotonSharing::PerEvent) {
                    tree = born_event(tree, preparation, sample_photon(rng));
                } else {
                    photons.clear();
                    for (std::size_t i = 0; i < tree.branches.size(); ++i) photons.push_back(sample_photon(rng));
                    tree = born_event(tree, preparation, photons);
                }
                try {
                    const Branch& current = dominant_history(tree);
                    const SwitchReport report = detect_switch(previous, current);
                    if (report.switched) switches.push_back({run, event, *report.divergence_depth});
                    previous = current;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::DegenerateDominant) throw;
                    tied = true;
                    break;
                }
            }
            if (tied) {
                ++local.ties;
                continue;
            }
            ++local.record_counts[record_index(previous.record)];
            for (const auto& s : switches) {
                ++local.switch_counts[s.event];
                if (local.switch_examples.size() < kMaxSwitchExamples) local.switch_examples.push_back(s);
            }
        }
        return local;
    });

    HistoryStatistics out;
    out.n_events = n_events;
    out.n_runs = tally.runs;
    out.ties = tally.ties;
    out.record_counts = tally.record_counts;
    out.switch_counts = tally.switch_counts;
    out.switch_examples = tally.switch_examples;

    const BornProbabilities p = born_probabilities(preparation);
    out.expected.assign(n_records, 1.0);
    for (std::size_t r = 0; r < n_records; ++r) {
        for (std::size_t t = 0; t < n_events; ++t) {
            const bool bit = (r >> (n_events - 1 - t)) & 1U;
            out.expected[r] *= bit ? p.p1 : p.p0;
        }
    }
    out.chi_square = stats::chi_square_gof(out.record_counts, out.expected);
    return out;
}

}  // namespace bornsim
