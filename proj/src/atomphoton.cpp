#include "bornsim/atomphoton.hpp"

#include <algorithm>
#include <cmath>

#include "bornsim/errors.hpp"

namespace bornsim {

AtomPhotonProcess build_atom_photon(double branch_amplitude, double relative_phase) {
    if (!(branch_amplitude > 0.0 && branch_amplitude < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "branch_amplitude must lie in (0, 1)");
    }
    using namespace atom_labels;
    const double other = std::sqrt(1.0 - branch_amplitude * branch_amplitude);
    const Complex other_amp = std::polar(other, relative_phase);

    ScatteringProcess::Rows rows{{
        {{0, kCcwOut, 1.0}},
        {{0, kCcwPair, branch_amplitude}, {1, kCcwScattered, other_amp}},
        {{1, kAbsorbed, branch_amplitude}, {0, kCwScattered, other_amp}},
        {{1, kCwOut, 1.0}},
    }};
    std::map<int, std::string> names{
        {kCcwOut, "ccw-out"},   {kAbsorbed, "absorbed"},  {kCwScattered, "cw-scattered"},
        {kCwOut, "cw-out"},     {kCcwPair, "ccw-pair"},   {kCcwScattered, "ccw-scattered"},
    };
    return {ScatteringProcess("atom-photon", std::move(rows), std::move(names)), branch_amplitude,
            relative_phase};
}

std::vector<QubitState> default_qubit_grid() {
    std::vector<QubitState> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(QubitState::from_probability(i / 10.0));
    return grid;
}

CertificationReport certify_born_equivalence(const AtomPhotonProcess& process, std::span<const QubitState> grid,
                                             std::uint64_t n_trials, std::uint64_t seed, double sigmas) {
    CertificationReport report;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const QubitState& qubit = grid[i];
        CertificationPoint point{};
        point.a2 = std::norm(qubit.a) / qubit.squared_norm();
        point.stats = run_trials(process.process, qubit, n_trials, seed + i);
        point.expected = born_probabilities(qubit).p0;
        point.bound = sigmas * std::sqrt(point.expected * (1.0 - point.expected) /
                                         static_cast<double>(std::max<std::uint64_t>(point.stats.decided(), 1)));
        point.deviation = point.stats.frequency_zero() - point.expected;
        point.pass = point.stats.decided() > 0 && std::abs(point.deviation) <= point.bound;
        report.pass = report.pass && point.pass;
        report.points.push_back(point);
    }
    return report;
}

}  // namespace bornsim
