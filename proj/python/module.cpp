// Python bindings for the simulation core. Heavy lifting stays in C++; the
// bindings hand back numpy arrays and small structs for analysis work.

#include "scramblesim/circuit_oracle.hpp"
#include "scramblesim/experiment.hpp"
#include "scramblesim/fokker_planck.hpp"
#include "scramblesim/oscillators.hpp"
#include "scramblesim/spin_chain.hpp"
#include "scramblesim/validation.hpp"
#include "scramblesim/weight_markov.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace scramble;

namespace {

CircuitParams make_circuit_params(int n_sites, double coupling, double exponent) {
    CircuitParams p;
    p.n_sites = n_sites;
    p.coupling = coupling;
    p.coupling_exponent = exponent;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Operator-spreading and scrambling simulations for globally "
              "coupled spin models";
    m.attr("__version__") = kArtifactVersion;

    // --- weight-space Markov chain ---------------------------------------
    py::class_<CircuitParams>(m, "CircuitParams")
        .def(py::init(&make_circuit_params), py::arg("n_sites"), py::arg("coupling"),
             py::arg("coupling_exponent") = 0.5)
        .def_readonly("n_sites", &CircuitParams::n_sites)
        .def_readonly("coupling", &CircuitParams::coupling)
        .def_readonly("coupling_exponent", &CircuitParams::coupling_exponent)
        .def("g_prime", &CircuitParams::g_prime);

    py::class_<WeightDistribution>(m, "WeightDistribution")
        .def_readonly("n_sites", &WeightDistribution::n_sites)
        .def_readonly("time_step", &WeightDistribution::time_step)
        .def_readonly("h", &WeightDistribution::h)
        .def_static("initial", &WeightDistribution::initial, py::arg("n_sites"))
        .def("at", [](const WeightDistribution& d, int w, int w1) { return d.at(w, w1); },
             py::arg("w"), py::arg("w1"))
        .def("marginal", &WeightDistribution::marginal)
        .def("mean_weight", &WeightDistribution::mean_weight)
        .def("sum", &WeightDistribution::sum);

    py::class_<TransitionMatrix>(m, "TransitionMatrix")
        .def_readonly("params", &TransitionMatrix::params)
        .def_readonly("r", &TransitionMatrix::r);

    py::class_<EvolveRecord>(m, "EvolveRecord")
        .def_readonly("time_step", &EvolveRecord::time_step)
        .def_readonly("mean_weight", &EvolveRecord::mean_weight)
        .def_readonly("mean_commutator", &EvolveRecord::mean_commutator);

    py::class_<EvolveResult>(m, "EvolveResult")
        .def_readonly("records", &EvolveResult::records)
        .def_readonly("checkpoints", &EvolveResult::checkpoints);

    m.def("build_transition_matrix", &build_transition_matrix, py::arg("params"),
          py::call_guard<py::gil_scoped_release>());
    m.def("evolve", &evolve, py::arg("matrix"), py::arg("steps"),
          py::arg("checkpoint_steps") = std::vector<int>{},
          py::call_guard<py::gil_scoped_release>());
    m.def("mean_commutator", &mean_commutator, py::arg("distribution"));
    m.def("mean_commutator_large_n", &mean_commutator_large_n, py::arg("distribution"));
    m.def("scrambling_time", &scrambling_time, py::arg("params"),
          py::arg("threshold") = 0.5, py::arg("max_steps") = 1 << 20,
          py::call_guard<py::gil_scoped_release>());
    m.def("uniform_string_distribution", &uniform_string_distribution, py::arg("n_sites"));
    m.def("one_step_distribution_analytic", &one_step_distribution_analytic,
          py::arg("params"));
    m.def("one_step_mean_weight_analytic", &one_step_mean_weight_analytic,
          py::arg("params"));

    // --- drift-diffusion continuum limit ----------------------------------
    py::class_<FPGrid>(m, "FPGrid")
        .def_static("full_domain", &FPGrid::full_domain, py::arg("n_sites"),
                    py::arg("n_points"))
        .def_readonly("n_points", &FPGrid::n_points)
        .def_readonly("w_min", &FPGrid::w_min)
        .def_readonly("w_max", &FPGrid::w_max)
        .def_readonly("n_sites", &FPGrid::n_sites)
        .def("spacing", &FPGrid::spacing)
        .def("node", &FPGrid::node, py::arg("i"));

    py::class_<FPDensity>(m, "FPDensity")
        .def_readonly("grid", &FPDensity::grid)
        .def_readonly("tau", &FPDensity::tau)
        .def_readonly("values", &FPDensity::values)
        .def("mass", &FPDensity::mass)
        .def("mean_weight", &FPDensity::mean_weight);

    py::class_<FPSample>(m, "FPSample")
        .def_readonly("tau", &FPSample::tau)
        .def_readonly("mean_weight", &FPSample::mean_weight)
        .def_readonly("mass", &FPSample::mass);

    py::class_<FPResult>(m, "FPResult")
        .def_readonly("samples", &FPResult::samples)
        .def_readonly("checkpoints", &FPResult::checkpoints)
        .def_readonly("final_density", &FPResult::final_density)
        .def_readonly("dt_used", &FPResult::dt_used)
        .def_readonly("n_steps", &FPResult::n_steps);

    py::enum_<CoefficientForm>(m, "CoefficientForm")
        .value("truncated", CoefficientForm::truncated)
        .value("full", CoefficientForm::full);

    py::class_<FPCoefficients>(m, "FPCoefficients")
        .def_static("weight_model", &FPCoefficients::weight_model, py::arg("n_sites"),
                    py::arg("form") = CoefficientForm::truncated);

    m.def("gaussian_bump", &gaussian_bump, py::arg("grid"), py::arg("center"),
          py::arg("width"));
    m.def("stationary_density", &stationary_density, py::arg("n_sites"), py::arg("grid"));
    m.def("l1_distance", &l1_distance, py::arg("a"), py::arg("b"));
    m.def(
        "integrate_fp",
        [](const FPDensity& initial, const FPCoefficients& coeffs, double tau_final,
           std::vector<double> sample_taus) {
            FPOptions opts;
            opts.sample_taus = std::move(sample_taus);
            return integrate_fp(initial, coeffs, tau_final, opts);
        },
        py::arg("initial"), py::arg("coefficients"), py::arg("tau_final"),
        py::arg("sample_taus") = std::vector<double>{},
        py::call_guard<py::gil_scoped_release>());

    // --- brute-force circuit ensemble -------------------------------------
    py::class_<MonteCarloResult>(m, "MonteCarloResult")
        .def_readonly("n_realizations", &MonteCarloResult::n_realizations)
        .def_readonly("mean", &MonteCarloResult::mean)
        .def_readonly("sem", &MonteCarloResult::sem)
        .def_readonly("commutator_mean", &MonteCarloResult::commutator_mean)
        .def_readonly("commutator_sem", &MonteCarloResult::commutator_sem);

    py::class_<CommutatorEstimate>(m, "CommutatorEstimate")
        .def_readonly("mean", &CommutatorEstimate::mean)
        .def_readonly("sem", &CommutatorEstimate::sem);

    m.def("monte_carlo_weight_distribution", &monte_carlo_weight_distribution,
          py::arg("params"), py::arg("steps"), py::arg("n_realizations"),
          py::arg("seed"), py::call_guard<py::gil_scoped_release>());
    m.def("direct_squared_commutator", &direct_squared_commutator, py::arg("params"),
          py::arg("probe_site"), py::arg("steps"), py::arg("n_realizations"),
          py::arg("seed"), py::call_guard<py::gil_scoped_release>());

    // --- spin-chain exact diagonalization ----------------------------------
    py::enum_<Boundary>(m, "Boundary")
        .value("open", Boundary::open)
        .value("periodic", Boundary::periodic);

    py::class_<ChainHamiltonianParams>(m, "ChainHamiltonianParams")
        .def(py::init([](int n_sites, double ising_j, double field_x, double field_z,
                         double global_g, Boundary boundary) {
                 ChainHamiltonianParams p;
                 p.n_sites = n_sites;
                 p.ising_j = ising_j;
                 p.field_x = field_x;
                 p.field_z = field_z;
                 p.global_g = global_g;
                 p.boundary = boundary;
                 return p;
             }),
             py::arg("n_sites"), py::arg("ising_j") = 1.0, py::arg("field_x") = 1.05,
             py::arg("field_z") = 0.0, py::arg("global_g") = 0.0,
             py::arg("boundary") = Boundary::open)
        .def_readonly("n_sites", &ChainHamiltonianParams::n_sites)
        .def_readonly("ising_j", &ChainHamiltonianParams::ising_j)
        .def_readonly("field_x", &ChainHamiltonianParams::field_x)
        .def_readonly("field_z", &ChainHamiltonianParams::field_z)
        .def_readonly("global_g", &ChainHamiltonianParams::global_g);

    py::class_<OtocSeries>(m, "OtocSeries")
        .def_readonly("probe_site", &OtocSeries::probe_site)
        .def_readonly("times", &OtocSeries::times)
        .def_readonly("values", &OtocSeries::values)
        .def_readonly("imag_error", &OtocSeries::imag_error);

    py::class_<EntropyPoint>(m, "EntropyPoint")
        .def_readonly("time", &EntropyPoint::time)
        .def_readonly("entropy", &EntropyPoint::entropy);

    py::class_<SectorStatistics>(m, "SectorStatistics")
        .def_readonly("momentum", &SectorStatistics::momentum)
        .def_readonly("spinflip_parity", &SectorStatistics::spinflip_parity)
        .def_readonly("dimension", &SectorStatistics::dimension)
        .def_readonly("n_gap_ratios", &SectorStatistics::n_gap_ratios)
        .def_readonly("mean_r", &SectorStatistics::mean_r)
        .def_readonly("eigenvalues", &SectorStatistics::eigenvalues);

    py::class_<LevelStatistics>(m, "LevelStatistics")
        .def_readonly("sectors", &LevelStatistics::sectors)
        .def_readonly("pooled_mean_r", &LevelStatistics::pooled_mean_r)
        .def_readonly("bootstrap_error", &LevelStatistics::bootstrap_error)
        .def_readonly("n_pooled", &LevelStatistics::n_pooled);

    m.def(
        "otoc",
        [](const ChainHamiltonianParams& params, int probe_site,
           std::vector<double> times, std::uint64_t seed, int n_states) {
            return otoc(params, probe_site, times, seed, n_states);
        },
        py::arg("params"), py::arg("probe_site"), py::arg("times"), py::arg("seed") = 0,
        py::arg("n_states") = 1, py::call_guard<py::gil_scoped_release>());
    m.def(
        "entanglement_entropy_quench",
        [](const ChainHamiltonianParams& params, std::vector<double> times) {
            return entanglement_entropy_quench(params, times);
        },
        py::arg("params"), py::arg("times"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "level_statistics",
        [](const ChainHamiltonianParams& params, int min_sector_dim) {
            return level_statistics(params, min_sector_dim);
        },
        py::arg("params"), py::arg("min_sector_dim") = 50,
        py::call_guard<py::gil_scoped_release>());
    m.def("gap_ratios", &gap_ratios, py::arg("eigenvalues"));

    // --- classical oscillator chain ----------------------------------------
    py::class_<OscillatorParams>(m, "OscillatorParams")
        .def(py::init([](int n_osc, double omega1, double omega2, double omega3,
                         double epsilon) {
                 OscillatorParams p;
                 p.n_osc = n_osc;
                 p.omega1 = omega1;
                 p.omega2 = omega2;
                 p.omega3 = omega3;
                 p.epsilon = epsilon;
                 return p;
             }),
             py::arg("n_osc"), py::arg("omega1") = 1.0, py::arg("omega2") = 1.0,
             py::arg("omega3") = 2.0, py::arg("epsilon") = 1e-5)
        .def_readonly("n_osc", &OscillatorParams::n_osc)
        .def_readonly("epsilon", &OscillatorParams::epsilon);

    py::class_<GrowthGrid>(m, "GrowthGrid")
        .def_readonly("n_ensemble", &GrowthGrid::n_ensemble)
        .def_readonly("dt_used", &GrowthGrid::dt_used)
        .def_readonly("times", &GrowthGrid::times)
        .def_readonly("mean_abs_dq", &GrowthGrid::mean_abs_dq);

    py::class_<LyapunovEstimate>(m, "LyapunovEstimate")
        .def_readonly("per_site", &LyapunovEstimate::per_site)
        .def_readonly("r_squared", &LyapunovEstimate::r_squared)
        .def_readonly("fitted_sites", &LyapunovEstimate::fitted_sites)
        .def_readonly("pooled", &LyapunovEstimate::pooled)
        .def_readonly("max_relative_spread", &LyapunovEstimate::max_relative_spread);

    m.def("perturbation_growth", &perturbation_growth, py::arg("params"),
          py::arg("t_final"), py::arg("n_ensemble"), py::arg("seed"),
          py::arg("dt") = 0.0, py::arg("n_samples") = 251,
          py::call_guard<py::gil_scoped_release>());
    m.def("lyapunov_estimate", &lyapunov_estimate, py::arg("grid"),
          py::arg("window_lo_factor") = 10.0, py::arg("window_hi") = 0.1,
          py::arg("min_points") = 5);
    m.def("reference_dt", &reference_dt, py::arg("params"));
    m.def("growth_dt", &growth_dt, py::arg("params"));

    // --- experiment runner and oracle suite --------------------------------
    py::class_<PointOutcome>(m, "PointOutcome")
        .def_readonly("index", &PointOutcome::index)
        .def_readonly("sweep_values", &PointOutcome::sweep_values)
        .def_readonly("seed", &PointOutcome::seed)
        .def_readonly("ok", &PointOutcome::ok)
        .def_readonly("error", &PointOutcome::error)
        .def_readonly("files", &PointOutcome::files);

    py::class_<RunOutcome>(m, "RunOutcome")
        .def_readonly("exit_code", &RunOutcome::exit_code)
        .def_readonly("message", &RunOutcome::message)
        .def_readonly("output_dir", &RunOutcome::output_dir)
        .def_readonly("points", &RunOutcome::points);

    m.def("run_experiment", &run_experiment, py::arg("config_path"),
          py::arg("output_root") = std::string{},
          py::call_guard<py::gil_scoped_release>());
    m.def("validate_config_text", &validate_config_text, py::arg("text"));

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("id", &CheckResult::id)
        .def_readonly("name", &CheckResult::name)
        .def_readonly("passed", &CheckResult::passed)
        .def_readonly("seconds", &CheckResult::seconds)
        .def_readonly("details", &CheckResult::details);

    m.def("validation_check_ids", &validation_check_ids);
    m.def("validation_check_name", &validation_check_name, py::arg("id"));
    m.def("run_validation_check", &run_validation_check, py::arg("id"),
          py::call_guard<py::gil_scoped_release>());

    py::register_exception<ConfigError>(m, "ConfigError");
}
