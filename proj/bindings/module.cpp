#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wvrecon/coupler.hpp"
#include "wvrecon/grid.hpp"
#include "wvrecon/pipeline.hpp"
#include "wvrecon/reconstructor.hpp"
#include "wvrecon/sampler.hpp"
#include "wvrecon/version.hpp"
#include "wvrecon/wigner.hpp"

namespace py = pybind11;
using namespace wvrecon;

namespace {

py::array_t<cxd> complex_array(const std::vector<cxd>& v) {
    return py::array_t<cxd>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> real_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> to_vector(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    return {a.data(), a.data() + a.size()};
}

StateDescriptor descriptor_from_terms(const std::vector<std::pair<cxd, cxd>>& terms,
                                      bool normalized) {
    StateDescriptor d;
    d.normalized = normalized;
    for (const auto& [c, a] : terms) d.terms.push_back({c, a});
    validate(d);
    return d;
}

}  // namespace

PYBIND11_MODULE(_wvrecon, m) {
    m.doc() = "Beam-splitter weak-measurement simulation and momentum-wavefunction "
              "reconstruction";
    m.attr("__version__") = kVersion;

    py::enum_<Representation>(m, "Representation")
        .value("Position", Representation::Position)
        .value("Momentum", Representation::Momentum);

    py::enum_<Quadrature>(m, "Quadrature")
        .value("X", Quadrature::X)
        .value("P", Quadrature::P);

    py::class_<GridSpec>(m, "GridSpec")
        .def_readonly("x_min", &GridSpec::x_min)
        .def_readonly("x_max", &GridSpec::x_max)
        .def_readonly("n_points", &GridSpec::n_points)
        .def_readonly("spacing", &GridSpec::spacing)
        .def("value", &GridSpec::value)
        .def("values",
             [](const GridSpec& g) {
                 std::vector<double> v(g.n_points);
                 for (std::size_t i = 0; i < g.n_points; ++i) v[i] = g.value(i);
                 return real_array(v);
             })
        .def("__repr__", [](const GridSpec& g) {
            return "<GridSpec [" + std::to_string(g.x_min) + ", " + std::to_string(g.x_max) +
                   ") n=" + std::to_string(g.n_points) + ">";
        });

    m.def("make_grid", &make_grid, py::arg("x_min"), py::arg("x_max"), py::arg("n_points"));
    m.def("default_grid", &default_grid);

    py::class_<StateDescriptor>(m, "StateDescriptor")
        .def(py::init(&descriptor_from_terms), py::arg("terms"), py::arg("normalized") = true,
             "terms: list of (coeff, alpha) complex pairs")
        .def_property_readonly("terms",
                               [](const StateDescriptor& d) {
                                   std::vector<std::pair<cxd, cxd>> out;
                                   for (const auto& t : d.terms) out.emplace_back(t.coeff, t.alpha);
                                   return out;
                               })
        .def_readonly("normalized", &StateDescriptor::normalized);

    m.def("rotate_descriptor", &rotate_descriptor, py::arg("descriptor"), py::arg("angle"));

    py::class_<Wavefunction>(m, "Wavefunction")
        .def_readonly("grid", &Wavefunction::grid)
        .def_readonly("representation", &Wavefunction::representation)
        .def_property_readonly(
            "amplitudes", [](const Wavefunction& w) { return complex_array(w.amplitudes); })
        .def("norm", &Wavefunction::norm);

    m.def(
        "realize_state",
        [](const StateDescriptor& d, const GridSpec& g) { return realize_state(d, g); },
        py::arg("descriptor"), py::arg("grid"));
    m.def("to_momentum", &to_momentum, py::arg("psi"));
    m.def("to_position", &to_position, py::arg("psi"));
    m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));

    py::class_<WignerGrid>(m, "WignerGrid")
        .def_readonly("x_axis", &WignerGrid::x_axis)
        .def_readonly("p_axis", &WignerGrid::p_axis)
        .def_property_readonly("values", [](const WignerGrid& w) {
            return py::array_t<double>(
                {static_cast<py::ssize_t>(w.x_axis.n_points),
                 static_cast<py::ssize_t>(w.p_axis.n_points)},
                w.values.data());
        });
    m.def("wigner", &wigner, py::arg("psi"), py::arg("p_axis"));

    py::class_<CouplingParams>(m, "CouplingParams")
        .def(py::init<double>(), py::arg("theta"))
        .def_readonly("theta", &CouplingParams::theta);

    py::class_<JointPosition>(m, "JointPosition")
        .def_readonly("system_axis", &JointPosition::system_axis)
        .def_readonly("meter_axis", &JointPosition::meter_axis)
        .def_property_readonly("amplitudes", [](const JointPosition& j) {
            return py::array_t<cxd>({static_cast<py::ssize_t>(j.system_axis.n_points),
                                     static_cast<py::ssize_t>(j.meter_axis.n_points)},
                                    j.amplitudes.data());
        });

    py::class_<JointAmplitude>(m, "JointAmplitude")
        .def_readonly("p_axis", &JointAmplitude::p_axis)
        .def_readonly("x_axis", &JointAmplitude::x_axis)
        .def("total_probability", &JointAmplitude::total_probability)
        .def_property_readonly("amplitudes", [](const JointAmplitude& j) {
            return py::array_t<cxd>({static_cast<py::ssize_t>(j.p_axis.n_points),
                                     static_cast<py::ssize_t>(j.x_axis.n_points)},
                                    j.amplitudes.data());
        });

    m.def("beam_split", &beam_split, py::arg("system"), py::arg("meter"), py::arg("params"));
    m.def("joint_momentum_position", &joint_momentum_position, py::arg("joint"));
    m.def(
        "postselection_density",
        [](const JointAmplitude& j) { return real_array(postselection_density(j)); },
        py::arg("joint"));
    m.def(
        "postselected_meter_mean",
        [](const JointAmplitude& j, double lo, double hi) {
            return postselected_meter_mean(j, {lo, hi});
        },
        py::arg("joint"), py::arg("lo"), py::arg("hi"));

    py::class_<WeakValueSample>(m, "WeakValueSample")
        .def_readonly("P", &WeakValueSample::P)
        .def_readonly("value", &WeakValueSample::value)
        .def_readonly("valid", &WeakValueSample::valid);
    m.def("weak_value", &weak_value, py::arg("psi_momentum"), py::arg("P"), py::arg("which"));
    m.def("linear_order_prediction", &linear_order_prediction, py::arg("psi_momentum"),
          py::arg("params"), py::arg("P"));

    m.def(
        "sample_joint",
        [](const JointAmplitude& j, std::int64_t n, std::uint64_t seed) {
            const auto records = sample_joint(j, n, seed);
            py::array_t<double> out({static_cast<py::ssize_t>(records.size()), py::ssize_t{2}});
            auto view = out.mutable_unchecked<2>();
            for (py::ssize_t i = 0; i < view.shape(0); ++i) {
                view(i, 0) = records[static_cast<std::size_t>(i)].P_outcome;
                view(i, 1) = records[static_cast<std::size_t>(i)].x_outcome;
            }
            return out;
        },
        py::arg("joint"), py::arg("n_runs"), py::arg("seed"),
        "returns an (n, 2) array of (P, x) outcomes");

    py::class_<BinnedEstimates>(m, "BinnedEstimates")
        .def_readonly("bin_width", &BinnedEstimates::bin_width)
        .def_readonly("total_runs", &BinnedEstimates::total_runs)
        .def_property_readonly(
            "bin_centers", [](const BinnedEstimates& b) { return real_array(b.bin_centers); })
        .def_property_readonly("counts",
                               [](const BinnedEstimates& b) {
                                   return py::array_t<std::int64_t>(
                                       static_cast<py::ssize_t>(b.counts.size()), b.counts.data());
                               })
        .def_property_readonly("p_hat",
                               [](const BinnedEstimates& b) { return real_array(b.p_hat); })
        .def_property_readonly("e_hat",
                               [](const BinnedEstimates& b) { return real_array(b.e_hat); })
        .def_property_readonly("std_error",
                               [](const BinnedEstimates& b) { return real_array(b.std_error); })
        .def_property_readonly("gap_flags", [](const BinnedEstimates& b) {
            std::vector<bool> flags(b.gap_flags.begin(), b.gap_flags.end());
            return flags;
        });

    m.def(
        "bin_records",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> records,
           double bin_width, double origin) {
            if (records.ndim() != 2 || records.shape(1) != 2) {
                throw py::value_error("records must be an (n, 2) array of (P, x)");
            }
            auto view = records.unchecked<2>();
            std::vector<MeasurementRecord> rs(static_cast<std::size_t>(view.shape(0)));
            for (py::ssize_t i = 0; i < view.shape(0); ++i) {
                rs[static_cast<std::size_t>(i)] = {view(i, 0), view(i, 1)};
            }
            return bin_records(rs, bin_width, origin);
        },
        py::arg("records"), py::arg("bin_width"), py::arg("origin") = 0.0);

    py::class_<Segment>(m, "Segment")
        .def_readonly("first", &Segment::first)
        .def_readonly("last", &Segment::last);
    m.def("detect_gaps", &detect_gaps, py::arg("binned"));

    py::class_<PhaseProfile>(m, "PhaseProfile")
        .def_property_readonly("P_values",
                               [](const PhaseProfile& p) { return real_array(p.P_values); })
        .def_property_readonly("phase", [](const PhaseProfile& p) { return real_array(p.phase); })
        .def_property_readonly("segment_id",
                               [](const PhaseProfile& p) {
                                   return py::array_t<int>(
                                       static_cast<py::ssize_t>(p.segment_id.size()),
                                       p.segment_id.data());
                               })
        .def_property_readonly("anchor_per_segment", [](const PhaseProfile& p) {
            return real_array(p.anchor_per_segment);
        });

    m.def(
        "reconstruct_modulus",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> p_hat) {
            return real_array(reconstruct_modulus(to_vector(p_hat)));
        },
        py::arg("p_hat"));
    m.def(
        "reconstruct_phase",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> e_hat,
           py::array_t<double, py::array::c_style | py::array::forcecast> centers,
           const std::vector<Segment>& segments, double theta, double bin_width) {
            return reconstruct_phase(to_vector(e_hat), to_vector(centers), segments, theta,
                                     bin_width);
        },
        py::arg("e_hat"), py::arg("bin_centers"), py::arg("segments"), py::arg("theta"),
        py::arg("bin_width"));
    m.def(
        "assemble_state",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> modulus,
           const PhaseProfile& profile, const GridSpec& grid) {
            return assemble_state(to_vector(modulus), profile, grid);
        },
        py::arg("modulus"), py::arg("profile"), py::arg("grid"));
    m.def("reconstruction_error", &reconstruction_error, py::arg("psi_exact"),
          py::arg("psi_rec"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init([](const StateDescriptor& state, double theta, std::int64_t n_runs,
                         std::uint64_t seed, double bin_width, const GridSpec& grid,
                         double rotation_angle, const std::string& output_dir) {
                 RunConfig c;
                 c.state = state;
                 c.theta = theta;
                 c.n_runs = n_runs;
                 c.seed = seed;
                 c.bin_width = bin_width;
                 c.grid = grid;
                 c.rotation_angle = rotation_angle;
                 c.output_dir = output_dir;
                 validate(c);
                 return c;
             }),
             py::arg("state"), py::arg("theta"), py::arg("n_runs") = 0, py::arg("seed") = 1,
             py::arg("bin_width") = 0.1, py::arg("grid") = default_grid(),
             py::arg("rotation_angle") = 0.0, py::arg("output_dir") = std::string{})
        .def_readwrite("theta", &RunConfig::theta)
        .def_readwrite("n_runs", &RunConfig::n_runs)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("bin_width", &RunConfig::bin_width)
        .def_readwrite("rotation_angle", &RunConfig::rotation_angle)
        .def_readwrite("output_dir", &RunConfig::output_dir);

    py::class_<ReconstructionResult>(m, "ReconstructionResult")
        .def_readonly("delta", &ReconstructionResult::delta)
        .def_readonly("segments", &ReconstructionResult::segments)
        .def_readonly("failed", &ReconstructionResult::failed)
        .def_readonly("psi_rec", &ReconstructionResult::psi_rec)
        .def_readonly("phase_profile", &ReconstructionResult::phase_profile)
        .def_property_readonly(
            "modulus", [](const ReconstructionResult& r) { return real_array(r.modulus); });

    py::class_<RunOutput>(m, "RunOutput")
        .def_readonly("result", &RunOutput::result)
        .def_readonly("psi_exact_momentum", &RunOutput::psi_exact_momentum)
        .def_property_readonly("summary",
                               [](const RunOutput& o) { return o.summary.dump(); })
        .def_property_readonly("manifest",
                               [](const RunOutput& o) { return o.manifest.dump(); });

    m.def("run_exact", &run_exact, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_monte_carlo", &run_monte_carlo, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
