#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bornsim/atomphoton.hpp"
#include "bornsim/branching.hpp"
#include "bornsim/cascade.hpp"
#include "bornsim/errors.hpp"
#include "bornsim/fock.hpp"
#include "bornsim/io.hpp"
#include "bornsim/scattering.hpp"
#include "bornsim/statespace.hpp"

namespace py = pybind11;
using namespace bornsim;

namespace {

BuiltinProcess process_by_name(const std::string& name) {
    if (name == "uniform") return BuiltinProcess::Uniform;
    if (name == "maximum") return BuiltinProcess::Maximum;
    if (name == "born") return BuiltinProcess::Born;
    throw Error(ErrorCode::InvalidArgument, "unknown process '" + name + "'");
}

CascadeOptions cascade_options(std::vector<std::size_t> order, std::size_t extra_stages) {
    CascadeOptions options;
    options.order = std::move(order);
    options.extra_stages = extra_stages;
    return options;
}

py::dict chi_square_dict(const stats::ChiSquareResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["dof"] = r.dof;
    d["p_value"] = r.p_value;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Local Born-rule simulation core";

    static py::exception<Error> error(m, "BornsimError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object instance = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            instance.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), instance.ptr());
        }
    });

    py::class_<PhotonState>(m, "PhotonState")
        .def(py::init<Complex, Complex>(), py::arg("alpha"), py::arg("beta"))
        .def_readonly("alpha", &PhotonState::alpha)
        .def_readonly("beta", &PhotonState::beta)
        .def("intensity", &PhotonState::intensity);

    py::class_<QubitState>(m, "QubitState")
        .def(py::init<Complex, Complex>(), py::arg("a"), py::arg("b"))
        .def_static("from_probability", &QubitState::from_probability, py::arg("p0"))
        .def_readonly("a", &QubitState::a)
        .def_readonly("b", &QubitState::b);

    py::class_<ScatteringProcess>(m, "ScatteringProcess")
        .def_property_readonly("name", &ScatteringProcess::name)
        .def_property_readonly("labels", &ScatteringProcess::labels);

    py::class_<OutcomeStatistics>(m, "OutcomeStatistics")
        .def_readonly("trials", &OutcomeStatistics::trials)
        .def_readonly("zero", &OutcomeStatistics::zero)
        .def_readonly("one", &OutcomeStatistics::one)
        .def_readonly("ties", &OutcomeStatistics::ties)
        .def_property_readonly("frequency_zero", &OutcomeStatistics::frequency_zero)
        .def_property_readonly("standard_error", &OutcomeStatistics::standard_error);

    m.def("builtin_process", [](const std::string& name) { return builtin_process(process_by_name(name)); },
          py::arg("name"));
    m.def("load_process_table", py::overload_cast<const std::filesystem::path&>(&io::read_process_table),
          py::arg("path"));
    m.def("sample_photon", [](std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return sample_photon(rng);
    }, py::arg("seed"), py::arg("stream") = 0);
    m.def("stripped_weights", [](const ScatteringProcess& p, const PhotonState& photon, const QubitState& qubit) {
        const auto w = stripped_weights(p, photon, qubit);
        return std::pair{w.zero, w.one};
    }, py::arg("process"), py::arg("photon"), py::arg("qubit"));
    m.def("local_outcome", [](const ScatteringProcess& p, const PhotonState& photon, const QubitState& qubit) {
        return static_cast<int>(local_outcome(p, photon, qubit).outcome);
    }, py::arg("process"), py::arg("photon"), py::arg("qubit"));
    m.def("born_probabilities", [](const QubitState& q) {
        const auto p = born_probabilities(q);
        return std::pair{p.p0, p.p1};
    }, py::arg("qubit"));
    m.def("rayleigh_oracle", &rayleigh_oracle, py::arg("ratio"));
    m.def("run_trials", &run_trials, py::arg("process"), py::arg("qubit"), py::arg("trials"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());

    m.def("dominant_eigenprojection", [](const Matrix& op, double tie_tolerance) {
        const auto d = dominant_eigenprojection(NonNegativeOperator(op), tie_tolerance);
        return py::make_tuple(d.weight, d.projector.entries(), d.eigenvector);
    }, py::arg("op"), py::arg("tie_tolerance") = kDefaultTieTolerance);

    py::class_<FockStateVector>(m, "FockState")
        .def_static("load", [](const std::filesystem::path& path) { return io::read_fock_fixture(path); },
                    py::arg("path"))
        .def("squared_norm", &FockStateVector::squared_norm)
        .def("strip", [](const FockStateVector& psi) { return Matrix(strip(psi).op.entries()); })
        .def("strip_normalized", [](const FockStateVector& psi, double tol) {
            return Vector(strip_normalized(psi, tol).amplitudes());
        }, py::arg("tie_tolerance") = kDefaultTieTolerance);

    py::class_<AtomPhotonProcess>(m, "AtomPhotonProcess")
        .def_readonly("process", &AtomPhotonProcess::process)
        .def_readonly("branch_amplitude", &AtomPhotonProcess::branch_amplitude);
    m.def("build_atom_photon", &build_atom_photon, py::arg("branch_amplitude") = std::numbers::sqrt2 / 2.0,
          py::arg("relative_phase") = 0.0);
    m.def("certify_born_equivalence", [](const AtomPhotonProcess& atom, std::uint64_t trials, std::uint64_t seed) {
        const auto grid = default_qubit_grid();
        const auto report = certify_born_equivalence(atom, grid, trials, seed);
        py::list points;
        for (const auto& p : report.points) {
            py::dict d;
            d["a2"] = p.a2;
            d["frequency"] = p.stats.frequency_zero();
            d["expected"] = p.expected;
            d["bound"] = p.bound;
            d["pass"] = p.pass;
            points.append(d);
        }
        return py::make_tuple(report.pass, points);
    }, py::arg("atom"), py::arg("trials"), py::arg("seed"));

    py::enum_<PhotonSharing>(m, "PhotonSharing")
        .value("PER_EVENT", PhotonSharing::PerEvent)
        .value("PER_BRANCH", PhotonSharing::PerBranch);
    m.def("run_history_experiment", [](const QubitState& prep, std::size_t events, std::uint64_t runs,
                                       std::uint64_t seed, PhotonSharing sharing) {
        HistoryStatistics s;
        {
            py::gil_scoped_release release;
            s = run_history_experiment(prep, events, runs, seed, {sharing});
        }
        py::dict d;
        d["record_counts"] = s.record_counts;
        d["expected"] = s.expected;
        d["ties"] = s.ties;
        d["switch_counts"] = s.switch_counts;
        d["chi_square"] = chi_square_dict(s.chi_square);
        return d;
    }, py::arg("preparation"), py::arg("events"), py::arg("runs"), py::arg("seed"),
       py::arg("sharing") = PhotonSharing::PerEvent);

    py::class_<ProjectorSet>(m, "ProjectorSet")
        .def(py::init<std::size_t, std::vector<Matrix>>(), py::arg("dim"), py::arg("projectors"))
        .def_static("load", [](const std::filesystem::path& path) { return io::read_projector_set(path); },
                    py::arg("path"))
        .def_property_readonly("dim", &ProjectorSet::dim)
        .def("__len__", &ProjectorSet::size);

    py::class_<CompletenessReport>(m, "CompletenessReport")
        .def_readonly("complete", &CompletenessReport::complete)
        .def_readonly("independent", &CompletenessReport::independent)
        .def_readonly("special_basis", &CompletenessReport::special_basis)
        .def_readonly("joint_ranks", &CompletenessReport::joint_ranks)
        .def_readonly("witness_error", &CompletenessReport::witness_error);
    m.def("validate", &validate, py::arg("set"));
    m.def("analytic_weights", [](const ProjectorSet& set, const Vector& psi, std::vector<std::size_t> order) {
        return analytic_weights(set, validate(set), StateVector(psi), order);
    }, py::arg("set"), py::arg("psi"), py::arg("order") = std::vector<std::size_t>{});
    m.def("cascade_distribution", [](const ProjectorSet& set, const Vector& psi, std::uint64_t runs,
                                     std::uint64_t seed, std::vector<std::size_t> order, std::size_t extra_stages) {
        CascadeDistribution dist;
        {
            py::gil_scoped_release release;
            dist = cascade_distribution(set, StateVector(psi), runs, seed, cascade_options(order, extra_stages));
        }
        py::dict d;
        d["counts"] = dist.counts;
        d["expected"] = dist.expected;
        d["ties"] = dist.ties;
        d["max_telescoping_error"] = dist.max_telescoping_error;
        d["chi_square"] = chi_square_dict(dist.chi_square);
        return d;
    }, py::arg("set"), py::arg("psi"), py::arg("runs"), py::arg("seed"),
       py::arg("order") = std::vector<std::size_t>{}, py::arg("extra_stages") = 0);
}
