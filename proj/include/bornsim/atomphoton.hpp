#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "bornsim/scattering.hpp"

namespace bornsim {

/// Two-level atom, |0> = (n=1, l=0) and |1> = (n=2, l=1), hit by a photon
/// written in the circular basis. Photon index 0 is counter-clockwise
/// (PhotonState::alpha), index 1 is clockwise (PhotonState::beta).
///
///   (ccw, 0) -> |0> ccw-out                                 wrong helicity, passes
///   (ccw, 1) -> amp |0> ccw-pair + c e^{i phi} |1> ccw-scattered
///   (cw,  0) -> amp |1> absorbed + c e^{i phi} |0> cw-scattered
///   (cw,  1) -> |1> cw-out                                  wrong helicity, passes
///
/// with c = sqrt(1 - amp^2). The absorbed-photon vacuum and the stimulated
/// two-photon state are each a single radiation label.
struct AtomPhotonProcess {
    ScatteringProcess process;
    double branch_amplitude;
    double relative_phase;
};

namespace atom_labels {
inline constexpr int kCcwOut = 1;
inline constexpr int kAbsorbed = 2;
inline constexpr int kCwScattered = 3;
inline constexpr int kCwOut = 4;
inline constexpr int kCcwPair = 5;
inline constexpr int kCcwScattered = 6;
}  // namespace atom_labels

/// Throws InvalidArgument unless 0 < branch_amplitude < 1.
AtomPhotonProcess build_atom_photon(double branch_amplitude = std::numbers::sqrt2 / 2.0,
                                    double relative_phase = 0.0);

struct CertificationPoint {
    double a2;
    OutcomeStatistics stats;
    double expected;
    /// Allowed |frequency - expected|: sigmas * sqrt(p (1 - p) / n).
    double bound;
    double deviation;
    bool pass;
};

struct CertificationReport {
    std::vector<CertificationPoint> points;
    bool pass = true;
};

/// |a|^2 = 0.1, 0.2, ..., 0.9 with real non-negative amplitudes.
std::vector<QubitState> default_qubit_grid();

/// Per grid point i, runs n_trials through run_trials with seed + i and
/// compares freq(0) to |a|^2/(|a|^2+|b|^2) at `sigmas` binomial standard errors.
CertificationReport certify_born_equivalence(const AtomPhotonProcess& process, std::span<const QubitState> grid,
                                             std::uint64_t n_trials, std::uint64_t seed, double sigmas = 4.0);

}  // namespace bornsim
