#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bornsim/fock.hpp"
#include "bornsim/rng.hpp"
#include "bornsim/statespace.hpp"

namespace bornsim {

/// alpha |first polarization> + beta |second polarization>. Not normalized;
/// only the direction matters to the local outcome.
struct PhotonState {
    Complex alpha;
    Complex beta;

    PhotonState(Complex alpha, Complex beta);
    double intensity() const { return std::norm(alpha) + std::norm(beta); }
};

/// a |0> + b |1>. Not normalized.
struct QubitState {
    Complex a;
    Complex b;

    QubitState(Complex a, Complex b);
    /// (sqrt(p0), sqrt(1 - p0)).
    static QubitState from_probability(double p0);
    double squared_norm() const { return std::norm(a) + std::norm(b); }
};

enum class BuiltinProcess { Uniform, Maximum, Born };

enum class Outcome : std::uint8_t { Zero = 0, One = 1 };

/// One output component of a basis map: amplitude * |qubit_out> |radiation label>.
struct ScatteringEntry {
    unsigned qubit_out;
    int label;
    Complex amplitude;
};

/// Photon-qubit unitary given by the image of each input basis state.
///
/// Row index = 2 * photon_index + qubit_index, i.e. the rows are
/// (p0 q0, p0 q1, p1 q0, p1 q1) with p0 the polarization multiplying alpha.
/// Radiation labels stand for mutually orthogonal outgoing field states.
class ScatteringProcess {
public:
    using Rows = std::array<std::vector<ScatteringEntry>, 4>;

    static constexpr double kUnitarityTolerance = 1e-12;

    /// Throws NotUnitary if rows are not orthonormal as vectors over
    /// (qubit_out, label) pairs.
    ScatteringProcess(std::string name, Rows rows, std::map<int, std::string> label_names = {});

    const std::string& name() const { return name_; }
    const Rows& rows() const { return rows_; }
    const std::vector<ScatteringEntry>& row(unsigned photon_index, unsigned qubit_index) const {
        return rows_[2 * photon_index + qubit_index];
    }
    /// Distinct labels, ascending; label k occupies inaccessible mode 2 + position.
    const std::vector<int>& labels() const { return labels_; }
    const std::map<int, std::string>& label_names() const { return label_names_; }

    /// Output Fock space: modes 0 and 1 are the accessible qubit levels,
    /// one inaccessible mode per radiation label, max_total 2.
    const std::shared_ptr<const FockSpace>& output_space() const { return space_; }
    std::size_t label_mode(int label) const;

private:
    std::string name_;
    Rows rows_;
    std::map<int, std::string> label_names_;
    std::vector<int> labels_;
    std::shared_ptr<const FockSpace> space_;
};

ScatteringProcess builtin_process(BuiltinProcess which);

/// alpha = G1 + i G2, beta = G3 + i G4 with iid standard normals, re-drawn
/// in the measure-zero event that both magnitudes fall below 1e-12.
PhotonState sample_photon(RngStream& rng);

FockStateVector scatter_global(const ScatteringProcess& process, const PhotonState& photon,
                               const QubitState& qubit);

/// Diagonal entries of the stripped output state at |1,0> and |0,1> of the
/// qubit sector.
struct StrippedWeights {
    double zero;
    double one;
};

StrippedWeights stripped_weights(const ScatteringProcess& process, const PhotonState& photon,
                                 const QubitState& qubit);

struct LocalOutcome {
    Outcome outcome;
    double weight_zero;
    double weight_one;
};

inline constexpr double kOutcomeTieTolerance = 1e-12;

/// Throws TieOutcome if the weights agree within tie_tolerance relative.
LocalOutcome local_outcome(const ScatteringProcess& process, const PhotonState& photon,
                           const QubitState& qubit, double tie_tolerance = kOutcomeTieTolerance);

/// Dominant label for a weight pair; throws TieOutcome within tolerance.
Outcome decide(const StrippedWeights& weights, double tie_tolerance = kOutcomeTieTolerance);

struct BornProbabilities {
    double p0;
    double p1;
};

BornProbabilities born_probabilities(const QubitState& qubit);

/// P(R1 * ratio > R2) for independent standard Rayleigh R1, R2, by nested
/// adaptive Gauss-Kronrod quadrature of the joint density. Throws
/// QuadratureFailure if the combined error estimate exceeds 1e-8.
double rayleigh_oracle(double ratio);

struct OutcomeStatistics {
    std::uint64_t trials = 0;
    std::uint64_t zero = 0;
    std::uint64_t one = 0;
    std::uint64_t ties = 0;

    /// Frequencies exclude ties.
    double frequency_zero() const;
    double frequency_one() const { return decided() == 0 ? 0.0 : 1.0 - frequency_zero(); }
    std::uint64_t decided() const { return zero + one; }
    double standard_error() const;

    OutcomeStatistics& operator+=(const OutcomeStatistics& other);
};

/// Trial t draws its photon from RngStream(seed, t).
OutcomeStatistics run_trials(const ScatteringProcess& process, const QubitState& qubit,
                             std::uint64_t n_trials, std::uint64_t seed);

}  // namespace bornsim
