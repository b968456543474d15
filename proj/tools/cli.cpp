#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bornsim/atomphoton.hpp"
#include "bornsim/branching.hpp"
#include "bornsim/cascade.hpp"
#include "bornsim/errors.hpp"
#include "bornsim/fock.hpp"
#include "bornsim/io.hpp"
#include "bornsim/scattering.hpp"
#include "bornsim/stats.hpp"

namespace bornsim::cli {

namespace {

constexpr double kSigmas = 4.0;
constexpr double kMinPValue = 0.001;

struct Common {
    std::string out_path;
    std::string format = "report";
    bool assert_bounds = false;
};

struct Result {
    std::string text;
    bool within_bounds = true;
};

// Thrown for semantic errors in otherwise well-formed flags.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Common& common) {
    sub->fallthrough();
    sub->allow_config_extras(CLI::config_extras_mode::error);
    sub->add_option("--out", common.out_path, "Write output to this file instead of stdout");
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"rows", "report"}))
        ->capture_default_str();
    sub->add_flag("--assert", common.assert_bounds, "Exit with status 2 if a statistical bound fails");
}

std::ostringstream make_stream() {
    std::ostringstream s;
    s << std::setprecision(12);
    return s;
}

std::string pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

QubitState qubit_from_a2(double a2) {
    if (!(a2 >= 0.0 && a2 <= 1.0)) throw UsageError("--a2 must lie in [0, 1]");
    return QubitState::from_probability(a2);
}

// ---------------------------------------------------------------- scatter

struct ScatterArgs {
    std::string process = "born";
    std::string table;
    double a2 = 0.5;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
};

Result cmd_scatter(const ScatterArgs& args, const Common& common) {
    const QubitState qubit = qubit_from_a2(args.a2);
    if (args.trials == 0) throw UsageError("--trials must be at least 1");

    std::optional<ScatteringProcess> proc;
    std::string claim = "claim:custom-process";
    std::optional<double> expected;
    if (!args.table.empty()) {
        proc = io::read_process_table(std::filesystem::path(args.table));
    } else if (args.process == "uniform") {
        proc = builtin_process(BuiltinProcess::Uniform);
        claim = "claim:uniform-equal-odds";
        expected = 0.5;
    } else if (args.process == "maximum") {
        proc = builtin_process(BuiltinProcess::Maximum);
        claim = "claim:maximum-dominant";
        if (args.a2 != 0.5) expected = args.a2 > 0.5 ? 1.0 : 0.0;
    } else {
        proc = builtin_process(BuiltinProcess::Born);
        claim = "claim:born-single-qubit";
        expected = born_probabilities(qubit).p0;
    }

    const OutcomeStatistics stats = run_trials(*proc, qubit, args.trials, args.seed);
    const double freq = stats.frequency_zero();
    double bound = 0.0;
    bool ok = true;
    if (expected) {
        bound = kSigmas * stats::binomial_standard_error(*expected, stats.decided());
        ok = stats.decided() > 0 && std::abs(freq - *expected) <= bound;
    }

    auto s = make_stream();
    if (common.format == "rows") {
        s << "outcome,count,frequency,expected,bound,ties\n";
        const double e0 = expected.value_or(NAN);
        s << 0 << ',' << stats.zero << ',' << freq << ',' << e0 << ',' << bound << ',' << stats.ties << '\n';
        s << 1 << ',' << stats.one << ',' << stats.frequency_one() << ',' << 1.0 - e0 << ',' << bound << ','
          << stats.ties << '\n';
    } else {
        s << "scatter: process " << proc->name() << ", |a|^2 = " << args.a2 << ", " << args.trials
          << " trials, seed " << args.seed << "\n";
        s << "  outcome 0: " << stats.zero << "  frequency " << freq << "\n";
        s << "  outcome 1: " << stats.one << "  frequency " << stats.frequency_one() << "\n";
        s << "  ties excluded: " << stats.ties << "\n";
        s << "  standard error: " << stats.standard_error() << "\n";
        if (expected) {
            s << "  expected P(0): " << *expected << "  allowed deviation " << bound << "  [" << claim << "] "
              << pass_word(ok) << "\n";
        } else {
            s << "  expected P(0): n/a  [" << claim << "]\n";
        }
    }
    return {s.str(), ok};
}

// ---------------------------------------------------------------- atom

struct AtomArgs {
    double amp = std::sqrt(0.5);
    double phase = 0.0;
    std::vector<double> a2;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
};

Result cmd_atom(const AtomArgs& args, const Common& common) {
    if (args.trials == 0) throw UsageError("--trials must be at least 1");
    std::vector<QubitState> grid;
    if (args.a2.empty()) {
        grid = default_qubit_grid();
    } else {
        for (double a2 : args.a2) grid.push_back(qubit_from_a2(a2));
    }
    const AtomPhotonProcess atom = build_atom_photon(args.amp, args.phase);
    const CertificationReport report = certify_born_equivalence(atom, grid, args.trials, args.seed, kSigmas);

    auto s = make_stream();
    if (common.format == "rows") {
        s << "a2,trials,frequency,expected,bound,deviation,pass\n";
        for (const auto& p : report.points) {
            s << p.a2 << ',' << p.stats.trials << ',' << p.stats.frequency_zero() << ',' << p.expected << ','
              << p.bound << ',' << p.deviation << ',' << (p.pass ? 1 : 0) << '\n';
        }
    } else {
        s << "atom: branch amplitude " << args.amp << ", relative phase " << args.phase << ", " << args.trials
          << " trials per point, seed " << args.seed << "\n";
        for (const auto& p : report.points) {
            s << "  |a|^2 = " << std::setw(5) << p.a2 << "  frequency " << p.stats.frequency_zero()
              << "  deviation " << p.deviation << " / " << p.bound << "  " << pass_word(p.pass) << "\n";
        }
        s << "  Born equivalence [claim:atom-photon-born] " << pass_word(report.pass) << "\n";
    }
    return {s.str(), report.pass};
}

// ---------------------------------------------------------------- branches

struct BranchArgs {
    double a2 = 0.5;
    std::size_t events = 3;
    std::uint64_t runs = 10000;
    std::string photons = "shared";
    std::uint64_t seed = 0;
};

std::string record_string(std::size_t index, std::size_t n_events) {
    std::string bits;
    for (std::size_t t = 0; t < n_events; ++t) bits += ((index >> (n_events - 1 - t)) & 1U) ? '1' : '0';
    return bits;
}

Result cmd_branches(const BranchArgs& args, const Common& common) {
    const QubitState prep = qubit_from_a2(args.a2);
    if (args.events == 0 || args.events > kMaxHistoryEvents) throw UsageError("--events must be in [1, 20]");
    if (args.runs == 0) throw UsageError("--runs must be at least 1");
    HistoryOptions options;
    options.sharing = args.photons == "per-branch" ? PhotonSharing::PerBranch : PhotonSharing::PerEvent;

    const HistoryStatistics stats = run_history_experiment(prep, args.events, args.runs, args.seed, options);
    const bool ok = stats.chi_square.p_value > kMinPValue;
    const double decided = static_cast<double>(stats.decided_runs());

    auto s = make_stream();
    if (common.format == "rows") {
        s << "record,count,frequency,expected\n";
        for (std::size_t r = 0; r < stats.record_counts.size(); ++r) {
            s << r << ',' << stats.record_counts[r] << ','
              << (decided > 0 ? static_cast<double>(stats.record_counts[r]) / decided : 0.0) << ','
              << stats.expected[r] << '\n';
        }
    } else {
        s << "branches: |a|^2 = " << args.a2 << ", " << args.events << " events, " << args.runs
          << " runs, photons " << args.photons << ", seed " << args.seed << "\n";
        for (std::size_t r = 0; r < stats.record_counts.size(); ++r) {
            s << "  record " << record_string(r, args.events) << ": " << stats.record_counts[r] << "  frequency "
              << (decided > 0 ? static_cast<double>(stats.record_counts[r]) / decided : 0.0) << "  expected "
              << stats.expected[r] << "\n";
        }
        s << "  ties excluded: " << stats.ties << "\n";
        s << "  chi-square " << stats.chi_square.statistic << " on " << stats.chi_square.dof << " dof, p = "
          << stats.chi_square.p_value << "  [claim:remembered-history-born] " << pass_word(ok) << "\n";
        s << "  switches per event:";
        for (auto c : stats.switch_counts) s << ' ' << c;
        s << "  (total " << stats.total_switches() << ")  [claim:branch-switch]\n";
        for (const auto& e : stats.switch_examples) {
            s << "    run " << e.run << ": event " << e.event << " rewrote history from depth " << e.divergence_depth
              << "\n";
        }
    }
    return {s.str(), ok};
}

// ---------------------------------------------------------------- cascade

struct CascadeArgs {
    std::string projectors;
    std::vector<double> psi;
    std::vector<double> weights;
    std::vector<std::size_t> order;
    std::size_t extra_stages = 0;
    std::uint64_t runs = 100000;
    std::uint64_t seed = 0;
};

struct IncompleteSetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
    return out;
}

Result cmd_cascade(const CascadeArgs& args, const Common& common) {
    if (args.runs == 0) throw UsageError("--runs must be at least 1");
    const ProjectorSet set = io::read_projector_set(std::filesystem::path(args.projectors));
    const CompletenessReport report = validate(set);

    Vector amplitudes;
    const auto d = static_cast<Eigen::Index>(set.dim());
    if (!args.psi.empty()) {
        if (args.psi.size() != 2 * set.dim()) {
            throw UsageError("--psi needs " + std::to_string(2 * set.dim()) + " numbers (re im pairs)");
        }
        amplitudes.resize(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            const auto k = static_cast<std::size_t>(i);
            amplitudes(i) = Complex(args.psi[2 * k], args.psi[2 * k + 1]);
        }
    } else if (!args.weights.empty()) {
        if (args.weights.size() != set.dim()) {
            throw UsageError("--weights needs " + std::to_string(set.dim()) + " values");
        }
        amplitudes.resize(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            const double w = args.weights[static_cast<std::size_t>(i)];
            if (w < 0.0) throw UsageError("--weights must be non-negative");
            amplitudes(i) = std::sqrt(w);
        }
    } else {
        amplitudes = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    }
    if (amplitudes.squaredNorm() <= 0.0) throw UsageError("the state must be nonzero");
    const StateVector psi(amplitudes);

    auto s = make_stream();
    const auto completeness = [&] {
        s << "  complete: " << (report.complete ? "yes" : "no") << ", independent: "
          << (report.independent ? "yes" : "no") << ", joint ranks: " << join(report.joint_ranks) << "\n";
        for (std::size_t k = 0; k < report.in_range.size(); ++k) {
            s << "    eigenspace " << k << ": I1 = {" << join(report.in_range[k]) << "}, I2 = {"
              << join(report.in_complement[k]) << "}, rank " << report.joint_ranks[k] << "\n";
        }
    };
    if (!report.complete) {
        s << "cascade: projector set " << args.projectors << " is not complete\n";
        completeness();
        throw IncompleteSetError(s.str());
    }

    CascadeOptions options;
    options.order = args.order;
    options.extra_stages = args.extra_stages;
    const CascadeDistribution dist = cascade_distribution(set, psi, args.runs, args.seed, options);
    const bool ok = dist.chi_square.p_value > kMinPValue && dist.max_telescoping_error <= 1e-9;
    const auto freqs = dist.frequencies();

    if (common.format == "rows") {
        s << "k,count,frequency,expected\n";
        for (std::size_t k = 0; k < dist.counts.size(); ++k) {
            s << k << ',' << dist.counts[k] << ',' << freqs[k] << ',' << dist.expected[k] << '\n';
        }
    } else {
        s << "cascade: " << args.projectors << " (dim " << set.dim() << ", " << set.size() << " projectors), "
          << args.runs << " runs, seed " << args.seed << "\n";
        completeness();
        for (std::size_t k = 0; k < dist.counts.size(); ++k) {
            s << "  k = " << k << ": " << dist.counts[k] << "  frequency " << freqs[k] << "  expected "
              << dist.expected[k] << "\n";
        }
        s << "  ties excluded: " << dist.ties << "\n";
        s << "  largest telescoping error: " << dist.max_telescoping_error << "\n";
        s << "  chi-square " << dist.chi_square.statistic << " on " << dist.chi_square.dof << " dof, p = "
          << dist.chi_square.p_value << "  [claim:cascade-born-rule] " << pass_word(ok) << "\n";
    }
    return {s.str(), ok};
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    std::vector<double> ratios{0.1, 0.5, 1.0, 2.0, 10.0};
};

Result cmd_oracle(const OracleArgs& args, const Common& common) {
    for (double r : args.ratios) {
        if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("--ratio values must be finite and positive");
    }
    auto s = make_stream();
    bool ok = true;
    if (common.format == "rows") s << "ratio,quadrature,closed_form,abs_diff\n";
    else s << "oracle: P(R1 * ratio > R2) for independent standard Rayleigh R1, R2\n";
    for (double r : args.ratios) {
        const double numeric = rayleigh_oracle(r);
        const double closed = r * r / (1.0 + r * r);
        const double diff = std::abs(numeric - closed);
        const bool point_ok = diff <= 1e-7;
        ok = ok && point_ok;
        if (common.format == "rows") {
            s << r << ',' << std::setprecision(17) << numeric << ',' << closed << ',' << diff << std::setprecision(12)
              << '\n';
        } else {
            s << "  ratio " << r << ": quadrature " << std::setprecision(15) << numeric << "  closed form " << closed
              << std::setprecision(12) << "  |diff| " << diff << "  [claim:rayleigh-integral] " << pass_word(point_ok)
              << "\n";
        }
    }
    return {s.str(), ok};
}

// ---------------------------------------------------------------- strip

struct StripArgs {
    std::string fixture;
    bool normalized = false;
    double tie_tolerance = kDefaultTieTolerance;
};

std::string occupations_text(const Occupations& occ) {
    if (occ.empty()) return "vac";
    std::string out;
    for (std::size_t i = 0; i < occ.size(); ++i) out += (i ? "," : "") + std::to_string(occ[i]);
    return out;
}

Result cmd_strip(const StripArgs& args, const Common& common) {
    const FockStateVector psi = io::read_fock_fixture(std::filesystem::path(args.fixture));
    const FockSpace& space = psi.space();
    auto s = make_stream();

    if (args.normalized) {
        const StateVector v = strip_normalized(psi, args.tie_tolerance);
        if (common.format == "rows") {
            s << "index,re,im\n";
            for (std::size_t i = 0; i < v.dim(); ++i) s << i << ',' << v[i].real() << ',' << v[i].imag() << '\n';
        } else {
            s << "strip --normalized: " << args.fixture << "  [claim:normalized-stripped-state]\n";
            s << "  accessible modes {" << join(space.partition().accessible()) << "}, dimension " << v.dim() << "\n";
            for (std::size_t i = 0; i < v.dim(); ++i) {
                if (std::abs(v[i]) == 0.0) continue;
                s << "  |" << occupations_text(space.accessible_basis()[i]) << ">: " << v[i].real() << " "
                  << v[i].imag() << "i\n";
            }
        }
        return {s.str(), true};
    }

    const StrippedState stripped = strip(psi);
    const Matrix& op = stripped.op.entries();
    if (common.format == "rows") {
        s << "row,col,re,im\n";
        for (Eigen::Index r = 0; r < op.rows(); ++r) {
            for (Eigen::Index c = 0; c < op.cols(); ++c) {
                if (op(r, c) == Complex(0.0)) continue;
                s << r << ',' << c << ',' << op(r, c).real() << ',' << op(r, c).imag() << '\n';
            }
        }
    } else {
        s << "strip: " << args.fixture << "  [claim:stripping-map]\n";
        s << "  accessible modes {" << join(space.partition().accessible()) << "}, dimension " << op.rows() << "\n";
        s << "  trace " << stripped.op.trace() << ", source squared norm " << psi.squared_norm() << "\n";
        s << "  nonzero entries:\n";
        for (Eigen::Index r = 0; r < op.rows(); ++r) {
            for (Eigen::Index c = 0; c < op.cols(); ++c) {
                if (std::abs(op(r, c)) == 0.0) continue;
                s << "    |" << occupations_text(space.accessible_basis()[static_cast<std::size_t>(r)]) << "><"
                  << occupations_text(space.accessible_basis()[static_cast<std::size_t>(c)]) << "|: "
                  << op(r, c).real() << " " << op(r, c).imag() << "i\n";
            }
        }
        const EigenSignature sig = eigen_signature(stripped.op);
        s << "  eigenvalues:";
        for (std::size_t i = 0; i < sig.subspaces().size(); ++i) {
            s << ' ' << sig.eigenvalues()[i] << " (x" << sig.dimensions()[i] << ")";
        }
        s << "\n";
    }
    return {s.str(), true};
}

int emit(const Result& result, const Common& common, std::ostream& out, std::ostream& err) {
    if (common.out_path.empty()) {
        out << result.text;
    } else {
        std::ofstream file(common.out_path);
        if (!file) {
            err << "error: cannot write " << common.out_path << "\n";
            return 1;
        }
        file << result.text;
    }
    if (common.assert_bounds && !result.within_bounds) {
        err << "assertion failed: a statistical bound was violated\n";
        return 2;
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Seeded Monte Carlo and oracle experiments for locally perceived measurement outcomes", "bornsim"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file; one [subcommand] section");
    app.allow_config_extras(CLI::config_extras_mode::error);

    Common common;

    ScatterArgs scatter;
    auto* sc = app.add_subcommand("scatter", "Repeated photon-qubit scattering with random photons");
    sc->add_option("--process", scatter.process, "Builtin process")
        ->check(CLI::IsMember({"uniform", "maximum", "born"}))
        ->capture_default_str();
    sc->add_option("--table", scatter.table, "Load the process from a table file instead")->check(CLI::ExistingFile);
    sc->add_option("--a2", scatter.a2, "|a|^2 of the qubit (real amplitudes)")->capture_default_str();
    sc->add_option("--trials", scatter.trials, "Number of trials")->capture_default_str();
    sc->add_option("--seed", scatter.seed, "Master seed")->required();
    add_common(sc, common);

    AtomArgs atom;
    auto* at = app.add_subcommand("atom", "Certify the atom-photon process against the Born rule");
    at->add_option("--amp", atom.amp, "Branch amplitude in (0, 1)")->capture_default_str();
    at->add_option("--phase", atom.phase, "Relative phase of the branch entries")->capture_default_str();
    at->add_option("--a2", atom.a2, "Qubit grid of |a|^2 values (default 0.1 ... 0.9)");
    at->add_option("--trials", atom.trials, "Trials per grid point")->capture_default_str();
    at->add_option("--seed", atom.seed, "Master seed")->required();
    add_common(at, common);

    BranchArgs branches;
    auto* br = app.add_subcommand("branches", "Remembered histories over repeated Born events");
    br->add_option("--a2", branches.a2, "|a|^2 of the fresh qubit")->capture_default_str();
    br->add_option("--events", branches.events, "Events per run (at most 20)")->capture_default_str();
    br->add_option("--runs", branches.runs, "Independent runs")->capture_default_str();
    br->add_option("--photons", branches.photons, "Photon sharing between branches")
        ->check(CLI::IsMember({"shared", "per-branch"}))
        ->capture_default_str();
    br->add_option("--seed", branches.seed, "Master seed")->required();
    add_common(br, common);

    CascadeArgs cascade;
    auto* ca = app.add_subcommand("cascade", "Projector cascade with fresh record qubits");
    ca->add_option("--projectors", cascade.projectors, "Projector set file")->required()->check(CLI::ExistingFile);
    auto* psi_opt = ca->add_option("--psi", cascade.psi, "State as re im pairs");
    ca->add_option("--weights", cascade.weights, "State as non-negative weights (amplitudes sqrt(w))")
        ->excludes(psi_opt);
    ca->add_option("--order", cascade.order, "Projector application order");
    ca->add_option("--extra-stages", cascade.extra_stages, "Redundant stages after the full pass")
        ->capture_default_str();
    ca->add_option("--runs", cascade.runs, "Independent cascades")->capture_default_str();
    ca->add_option("--seed", cascade.seed, "Master seed")->required();
    add_common(ca, common);

    OracleArgs oracle;
    auto* orc = app.add_subcommand("oracle", "Rayleigh double integral by adaptive quadrature");
    orc->add_option("--ratio", oracle.ratios, "Ratios |a|/|b|")->capture_default_str();
    add_common(orc, common);

    StripArgs strip_args;
    auto* st = app.add_subcommand("strip", "Stripped operator of a Fock fixture");
    st->add_option("--fixture", strip_args.fixture, "Fock fixture file")->required()->check(CLI::ExistingFile);
    st->add_flag("--normalized", strip_args.normalized, "Print the dominant normalized state instead");
    st->add_option("--tie-tolerance", strip_args.tie_tolerance, "Relative tie tolerance")->capture_default_str();
    add_common(st, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
            err << "run 'bornsim " << sub->get_name() << " --help' for usage\n";
        } else {
            err << "run 'bornsim --help' for usage\n";
        }
        return 1;
    }

    try {
        Result result;
        if (*sc) result = cmd_scatter(scatter, common);
        else if (*at) result = cmd_atom(atom, common);
        else if (*br) result = cmd_branches(branches, common);
        else if (*ca) result = cmd_cascade(cascade, common);
        else if (*orc) result = cmd_oracle(oracle, common);
        else result = cmd_strip(strip_args, common);
        return emit(result, common, out, err);
    } catch (const IncompleteSetError& e) {
        err << e.what();
        err << "error: " << to_string(ErrorCode::IncompleteSet) << ": cascade needs every joint rank to be 1\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bornsim::cli
