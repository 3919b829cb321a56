#include "scramblesim/experiment.hpp"

#include "scramblesim/circuit_oracle.hpp"
#include "scramblesim/common.hpp"
#include "scramblesim/fokker_planck.hpp"
#include "scramblesim/oscillators.hpp"
#include "scramblesim/spin_chain.hpp"
#include "scramblesim/validation.hpp"
#include "scramblesim/weight_markov.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace scramble {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Line-based CSV assembly; every numeric cell goes through fmt17 so reruns
// of the same config are byte-identical.
class Csv {
  public:
    explicit Csv(std::initializer_list<const char*> columns) {
        bool first = true;
        for (const char* c : columns) {
            if (!first) text_ += ',';
            text_ += c;
            first = false;
        }
        text_ += '\n';
    }
    Csv& cell(double v) { return raw(fmt17(v)); }
    Csv& cell(int v) { return raw(std::to_string(v)); }
    Csv& cell(const std::string& v) { return raw(csv_quote(v)); }
    void end_row() {
        text_ += '\n';
        row_open_ = false;
    }
    const std::string& text() const { return text_; }

  private:
    Csv& raw(const std::string& s) {
        if (row_open_) text_ += ',';
        text_ += s;
        row_open_ = true;
        return *this;
    }
    std::string text_;
    bool row_open_ = false;
};

// ---------------------------------------------------------------------------
// Config schema

enum class FieldType { integer, real, boolean, string, real_array, int_array };

struct FieldSpec {
    const char* key;
    FieldType type;
    bool required;
    const char* fallback;  // JSON literal for optional fields
    const char* help;
    const char* allowed = nullptr;  // space-separated legal values (string fields)
};

struct KindSpec {
    const char* name;
    const char* summary;
    std::vector<FieldSpec> fields;

    const FieldSpec* find(const std::string& key) const {
        for (const FieldSpec& f : fields)
            if (key == f.key) return &f;
        return nullptr;
    }
};

const std::vector<KindSpec>& kind_specs() {
    static const std::vector<KindSpec> specs = {
        {"markov-evolve",
         "Evolve the reduced weight distribution and record mean weight and "
         "squared commutator per step",
         {
             {"n_sites", FieldType::integer, true, nullptr, "number of sites N"},
             {"coupling", FieldType::real, true, nullptr, "coupling g"},
             {"coupling_exponent", FieldType::real, false, "0.5",
              "a in g' = g / N^a"},
             {"steps", FieldType::integer, true, nullptr, "circuit steps"},
             {"checkpoint_every", FieldType::integer, false, "0",
              "store the full distribution every k steps (0: final only)"},
         }},
        {"fp-integrate",
         "March the drift-diffusion weight density and record its moments",
         {
             {"n_sites", FieldType::integer, true, nullptr, "number of sites N"},
             {"tau_final", FieldType::real, true, nullptr, "end of the g^2 t range"},
             {"n_points", FieldType::integer, false, "1025", "grid nodes"},
             {"coefficient_form", FieldType::string, false, "\"truncated\"",
              "truncated | full", "truncated full"},
             {"drift_scheme", FieldType::string, false, "\"limited_upwind\"",
              "upwind | limited_upwind", "upwind limited_upwind"},
             {"n_samples", FieldType::integer, false, "81", "moment samples"},
             {"initial_center", FieldType::real, false, "1.0",
              "center of the initial bump"},
             {"initial_width", FieldType::real, false, "0.0",
              "bump width (0: one grid spacing)"},
             {"store_checkpoints", FieldType::boolean, false, "false",
              "write the full density at every sample time"},
         }},
        {"circuit-mc",
         "Monte-Carlo average of brute-force circuit realizations (N <= 10)",
         {
             {"n_sites", FieldType::integer, true, nullptr, "number of sites N"},
             {"coupling", FieldType::real, true, nullptr, "coupling g"},
             {"coupling_exponent", FieldType::real, false, "0.5",
              "a in g' = g / N^a"},
             {"steps", FieldType::integer, true, nullptr, "circuit steps"},
             {"n_realizations", FieldType::integer, true, nullptr,
              "independent circuit draws"},
         }},
        {"otoc",
         "Out-of-time-order correlator of Z_1(t) with Z_r in Haar states",
         {
             {"n_sites", FieldType::integer, true, nullptr, "number of sites N"},
             {"ising_j", FieldType::real, false, "1.0", "nearest-neighbour ZZ"},
             {"field_x", FieldType::real, false, "1.05", "transverse field"},
             {"field_z", FieldType::real, false, "0.0", "longitudinal field"},
             {"global_g", FieldType::real, false, "0.0",
              "all-to-all ZZ coupling g"},
             {"boundary", FieldType::string, false, "\"open\"", "open | periodic",
              "open periodic"},
             {"probe_site", FieldType::integer, true, nullptr, "probe site r"},
             {"times", FieldType::real_array, true, nullptr,
              "ascending sample times"},
             {"n_states", FieldType::integer, false, "1", "Haar states averaged"},
         }},
        {"entropy",
         "Half-cut entanglement entropy along a quench from the +y product state",
         {
             {"n_sites", FieldType::integer, true, nullptr, "number of sites N"},
             {"ising_j", FieldType::real, false, "1.0", "nearest-neighbour ZZ"},
             {"field_x", FieldType::real, false, "1.05", "transverse field"},
             {"field_z", FieldType::real, false, "0.0", "longitudinal field"},
             {"global_g", FieldType::real, false, "0.0",
              "all-to-all ZZ coupling g"},
             {"boundary", FieldType::string, false, "\"open\"", "open | periodic",
              "open periodic"},
             {"times", FieldType::real_array, true, nullptr,
              "ascending sample times"},
         }},
        {"level-stats",
         "Symmetry-resolved spectra and adjacent-gap ratios (periodic, h_z = 0)",
         {
             {"n_sites", FieldType::integer, true, nullptr, "number of sites N"},
             {"ising_j", FieldType::real, false, "1.0", "nearest-neighbour ZZ"},
             {"field_x", FieldType::real, false, "1.05", "transverse field"},
             {"global_g", FieldType::real, true, nullptr,
              "all-to-all ZZ coupling g"},
             {"min_sector_dim", FieldType::integer, false, "50",
              "sectors below this size stay out of the pooled mean"},
         }},
        {"classical-growth",
         "Two-configuration perturbation protocol for the oscillator chain",
         {
             {"n_osc", FieldType::integer, true, nullptr, "number of oscillators"},
             {"omega1", FieldType::real, false, "1.0", "nearest-neighbour spring"},
             {"omega2", FieldType::real, false, "1.0", "collective spring"},
             {"omega3", FieldType::real, false, "2.0", "quartic stiffness"},
             {"epsilon", FieldType::real, false, "1e-5", "initial kick on site 1"},
             {"t_final", FieldType::real, true, nullptr, "simulated time span"},
             {"n_ensemble", FieldType::integer, true, nullptr,
              "initial conditions averaged"},
             {"n_samples", FieldType::integer, false, "251", "sample times"},
             {"dt", FieldType::real, false, "0.0",
              "integrator step (0: stability default)"},
             {"window_lo_factor", FieldType::real, false, "10.0",
              "growth-window floor as a multiple of epsilon"},
             {"window_hi", FieldType::real, false, "0.1", "growth-window ceiling"},
         }},
        {"validate",
         "Cross-module oracle suite; prints one pass/fail line per check",
         {
             {"criteria", FieldType::int_array, false, "[]",
              "check ids to run (empty: all)"},
         }},
    };
    return specs;
}

const KindSpec* find_kind(const std::string& name) {
    for (const KindSpec& k : kind_specs())
        if (name == k.name) return &k;
    return nullptr;
}

bool type_matches(FieldType t, const json& v) {
    switch (t) {
        case FieldType::integer: return v.is_number_integer() || v.is_number_unsigned();
        case FieldType::real: return v.is_number();
        case FieldType::boolean: return v.is_boolean();
        case FieldType::string: return v.is_string();
        case FieldType::real_array:
            return v.is_array() &&
                   std::all_of(v.begin(), v.end(),
                               [](const json& e) { return e.is_number(); });
        case FieldType::int_array:
            return v.is_array() &&
                   std::all_of(v.begin(), v.end(), [](const json& e) {
                       return e.is_number_integer() || e.is_number_unsigned();
                   });
    }
    return false;
}

const char* type_name(FieldType t) {
    switch (t) {
        case FieldType::integer: return "integer";
        case FieldType::real: return "number";
        case FieldType::boolean: return "boolean";
        case FieldType::string: return "string";
        case FieldType::real_array: return "array of numbers";
        case FieldType::int_array: return "array of integers";
    }
    return "?";
}

struct ParsedConfig {
    const KindSpec* kind = nullptr;
    std::uint64_t seed = 0;
    std::string output_dir;
    json fixed_params;  // defaults filled, sweep axes excluded
    std::vector<std::pair<std::string, json>> sweep_axes;  // alphabetical
    std::size_t n_points = 1;
};

int line_of_offset(const std::string& text, std::size_t byte) {
    return 1 + static_cast<int>(
                   std::count(text.begin(),
                              text.begin() + std::min(byte, text.size()), '\n'));
}

ParsedConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError("config is not valid JSON (line " +
                          std::to_string(line_of_offset(text, err.byte)) +
                          "): " + err.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    static const std::set<std::string> top_keys = {"experiment", "seed", "output_dir",
                                                   "params", "sweep"};
    for (const auto& item : root.items())
        if (!top_keys.count(item.key()))
            throw ConfigError("unknown top-level key \"" + item.key() + "\"");

    if (!root.contains("experiment") || !root["experiment"].is_string())
        throw ConfigError("\"experiment\" must name an experiment kind");
    const std::string kind_name = root["experiment"].get<std::string>();
    const KindSpec* kind = find_kind(kind_name);
    if (!kind) {
        std::string known;
        for (const KindSpec& k : kind_specs()) known += std::string(" ") + k.name;
        throw ConfigError("unknown experiment \"" + kind_name + "\"; available:" + known);
    }

    ParsedConfig cfg;
    cfg.kind = kind;

    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
            throw ConfigError("\"seed\" must be a nonnegative integer");
        if (root["seed"].is_number_integer() && root["seed"].get<long long>() < 0)
            throw ConfigError("\"seed\" must be a nonnegative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }

    cfg.output_dir = kind_name;
    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string() || root["output_dir"].get<std::string>().empty())
            throw ConfigError("\"output_dir\" must be a nonempty string");
        cfg.output_dir = root["output_dir"].get<std::string>();
        if (std::filesystem::path(cfg.output_dir).is_absolute())
            throw ConfigError("\"output_dir\" must be relative to the output root");
    }

    if (!root.contains("params") || !root["params"].is_object())
        throw ConfigError("\"params\" must be an object");
    const json& params = root["params"];

    std::set<std::string> sweep_keys;
    if (root.contains("sweep")) {
        if (!root["sweep"].is_object()) throw ConfigError("\"sweep\" must be an object");
        for (const auto& item : root["sweep"].items()) {
            const FieldSpec* field = kind->find(item.key());
            if (!field)
                throw ConfigError("sweep." + item.key() + " is not a parameter of " +
                                  kind_name);
            if (field->type != FieldType::integer && field->type != FieldType::real)
                throw ConfigError("sweep." + item.key() + " must be a numeric parameter");
            if (!item.value().is_array() || item.value().empty())
                throw ConfigError("sweep." + item.key() + " must be a nonempty array");
            for (const json& v : item.value())
                if (!type_matches(field->type, v))
                    throw ConfigError("sweep." + item.key() + " values must each be a " +
                                      type_name(field->type));
            if (params.contains(item.key()))
                throw ConfigError("params." + item.key() +
                                  " is both fixed and swept; pick one");
            sweep_keys.insert(item.key());
            cfg.sweep_axes.emplace_back(item.key(), item.value());
            cfg.n_points *= item.value().size();
        }
    }

    for (const auto& item : params.items()) {
        const FieldSpec* field = kind->find(item.key());
        if (!field) {
            std::string known;
            for (const FieldSpec& f : kind->fields) known += std::string(" ") + f.key;
            throw ConfigError("params." + item.key() + " is not a parameter of " +
                              kind_name + "; known:" + known);
        }
        if (!type_matches(field->type, item.value()))
            throw ConfigError("params." + item.key() + " must be a " +
                              type_name(field->type));
        if (field->allowed && item.value().is_string()) {
            std::istringstream options(field->allowed);
            std::string tok;
            bool legal = false;
            while (options >> tok) legal = legal || tok == item.value().get<std::string>();
            if (!legal)
                throw ConfigError("params." + item.key() + " must be one of: " +
                                  field->allowed);
        }
    }

    cfg.fixed_params = json::object();
    for (const FieldSpec& field : kind->fields) {
        if (sweep_keys.count(field.key)) continue;
        if (params.contains(field.key))
            cfg.fixed_params[field.key] = params[field.key];
        else if (field.required)
            throw ConfigError(std::string("params.") + field.key + " is required for " +
                              kind_name);
        else
            cfg.fixed_params[field.key] = json::parse(field.fallback);
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Per-kind runners. Each returns (file name, file content) pairs; file names
// get a pointNNN_ prefix attached by the caller.

using FileList = std::vector<std::pair<std::string, std::string>>;

Boundary parse_boundary(const json& params) {
    const std::string b = params.at("boundary").get<std::string>();
    if (b == "open") return Boundary::open;
    if (b == "periodic") return Boundary::periodic;
    throw std::invalid_argument("boundary must be \"open\" or \"periodic\"");
}

FileList run_markov_evolve(const json& params, std::uint64_t) {
    CircuitParams p;
    p.n_sites = params.at("n_sites").get<int>();
    p.coupling = params.at("coupling").get<double>();
    p.coupling_exponent = params.at("coupling_exponent").get<double>();
    const int steps = params.at("steps").get<int>();
    const int every = params.at("checkpoint_every").get<int>();

    std::vector<int> checkpoint_steps;
    if (every > 0)
        for (int t = every; t < steps; t += every) checkpoint_steps.push_back(t);
    checkpoint_steps.push_back(steps);

    const TransitionMatrix tm = build_transition_matrix(p);
    const EvolveResult res = evolve(tm, steps, checkpoint_steps);

    Csv evolution{"step", "g2t", "mean_weight", "mean_weight_over_n",
                  "mean_commutator"};
    const double g2 = p.coupling * p.coupling;
    for (const EvolveRecord& rec : res.records) {
        evolution.cell(rec.time_step)
            .cell(g2 * rec.time_step)
            .cell(rec.mean_weight)
            .cell(rec.mean_weight / p.n_sites)
            .cell(rec.mean_commutator);
        evolution.end_row();
    }

    Csv dists{"step", "w", "w1", "h"};
    for (const WeightDistribution& d : res.checkpoints) {
        for (int w1 = 0; w1 <= 1; ++w1)
            for (int w = w1; w <= p.n_sites - 1 + w1; ++w) {
                dists.cell(d.time_step).cell(w).cell(w1).cell(d.at(w, w1));
                dists.end_row();
            }
    }
    return {{"evolution.csv", evolution.text()}, {"distributions.csv", dists.text()}};
}

FileList run_fp_integrate(const json& params, std::uint64_t) {
    const int n = params.at("n_sites").get<int>();
    const double tau_final = params.at("tau_final").get<double>();
    const int n_samples = params.at("n_samples").get<int>();
    if (n_samples < 1) throw std::invalid_argument("n_samples must be positive");

    const std::string form_name = params.at("coefficient_form").get<std::string>();
    CoefficientForm form;
    if (form_name == "truncated")
        form = CoefficientForm::truncated;
    else if (form_name == "full")
        form = CoefficientForm::full;
    else
        throw std::invalid_argument("coefficient_form must be \"truncated\" or \"full\"");

    const std::string scheme_name = params.at("drift_scheme").get<std::string>();
    FPOptions opts;
    if (scheme_name == "upwind")
        opts.drift_scheme = DriftScheme::upwind;
    else if (scheme_name == "limited_upwind")
        opts.drift_scheme = DriftScheme::limited_upwind;
    else
        throw std::invalid_argument(
            "drift_scheme must be \"upwind\" or \"limited_upwind\"");

    const FPGrid grid = FPGrid::full_domain(n, params.at("n_points").get<int>());
    for (int i = 1; i <= n_samples; ++i)
        opts.sample_taus.push_back(tau_final * i / n_samples);
    opts.store_checkpoints = params.at("store_checkpoints").get<bool>();

    double width = params.at("initial_width").get<double>();
    if (width <= 0) width = grid.spacing();
    const FPDensity initial =
        gaussian_bump(grid, params.at("initial_center").get<double>(), width);

    const FPResult res =
        integrate_fp(initial, FPCoefficients::weight_model(n, form), tau_final, opts);

    Csv moments{"tau", "mean_weight", "mass"};
    for (const FPSample& s : res.samples) {
        moments.cell(s.tau).cell(s.mean_weight).cell(s.mass);
        moments.end_row();
    }

    Csv density{"w", "h"};
    for (int i = 0; i < grid.n_points; ++i) {
        density.cell(grid.node(i)).cell(res.final_density.values[i]);
        density.end_row();
    }

    FileList files = {{"moments.csv", moments.text()},
                      {"final_density.csv", density.text()}};
    if (opts.store_checkpoints) {
        Csv cps{"tau", "w", "h"};
        for (const FPDensity& d : res.checkpoints)
            for (int i = 0; i < grid.n_points; ++i) {
                cps.cell(d.tau).cell(grid.node(i)).cell(d.values[i]);
                cps.end_row();
            }
        files.emplace_back("checkpoints.csv", cps.text());
    }
    return files;
}

FileList run_circuit_mc(const json& params, std::uint64_t seed) {
    CircuitParams p;
    p.n_sites = params.at("n_sites").get<int>();
    p.coupling = params.at("coupling").get<double>();
    p.coupling_exponent = params.at("coupling_exponent").get<double>();
    const int steps = params.at("steps").get<int>();
    const int n_real = params.at("n_realizations").get<int>();

    const MonteCarloResult mc =
        monte_carlo_weight_distribution(p, steps, n_real, seed);

    Csv dist{"t", "w", "w1", "h_mean", "h_sem"};
    for (int t = 0; t <= steps; ++t)
        for (int w1 = 0; w1 <= 1; ++w1)
            for (int w = w1; w <= p.n_sites - 1 + w1; ++w) {
                const int idx = WeightDistribution::packed_index(p.n_sites, w, w1);
                dist.cell(t).cell(w).cell(w1).cell(mc.mean[t].h[idx]).cell(
                    mc.sem[t][idx]);
                dist.end_row();
            }

    Csv comm{"t", "commutator_mean", "commutator_sem"};
    for (int t = 0; t <= steps; ++t) {
        comm.cell(t).cell(mc.commutator_mean[t]).cell(mc.commutator_sem[t]);
        comm.end_row();
    }
    return {{"distribution.csv", dist.text()}, {"commutator.csv", comm.text()}};
}

ChainHamiltonianParams chain_params_from(const json& params) {
    ChainHamiltonianParams p;
    p.n_sites = params.at("n_sites").get<int>();
    p.ising_j = params.at("ising_j").get<double>();
    p.field_x = params.at("field_x").get<double>();
    if (params.contains("field_z")) p.field_z = params.at("field_z").get<double>();
    p.global_g = params.at("global_g").get<double>();
    p.boundary = params.contains("boundary") ? parse_boundary(params) : Boundary::open;
    return p;
}

FileList run_otoc(const json& params, std::uint64_t seed) {
    const ChainHamiltonianParams p = chain_params_from(params);
    const std::vector<double> times =
        params.at("times").get<std::vector<double>>();
    const OtocSeries series = otoc(p, params.at("probe_site").get<int>(), times, seed,
                                   params.at("n_states").get<int>());

    Csv csv{"time", "otoc_f", "squared_commutator", "imag_error"};
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        csv.cell(series.times[i])
            .cell(series.values[i])
            .cell(1.0 - series.values[i])
            .cell(series.imag_error[i]);
        csv.end_row();
    }
    return {{"otoc.csv", csv.text()}};
}

FileList run_entropy(const json& params, std::uint64_t) {
    const ChainHamiltonianParams p = chain_params_from(params);
    const std::vector<double> times =
        params.at("times").get<std::vector<double>>();
    const auto points = entanglement_entropy_quench(p, times);

    Csv csv{"time", "entropy"};
    for (const EntropyPoint& pt : points) {
        csv.cell(pt.time).cell(pt.entropy);
        csv.end_row();
    }
    return {{"entropy.csv", csv.text()}};
}

FileList run_level_stats(const json& params, std::uint64_t seed) {
    ChainHamiltonianParams p;
    p.n_sites = params.at("n_sites").get<int>();
    p.ising_j = params.at("ising_j").get<double>();
    p.field_x = params.at("field_x").get<double>();
    p.field_z = 0.0;
    p.global_g = params.at("global_g").get<double>();
    p.boundary = Boundary::periodic;

    const LevelStatistics ls =
        level_statistics(p, params.at("min_sector_dim").get<int>(), seed);

    Csv sectors{"momentum", "spinflip_parity", "dimension", "n_gap_ratios",
                "mean_r", "max_offblock"};
    for (const SectorStatistics& s : ls.sectors) {
        sectors.cell(s.momentum)
            .cell(s.spinflip_parity)
            .cell(s.dimension)
            .cell(s.n_gap_ratios)
            .cell(s.mean_r)
            .cell(s.max_offblock);
        sectors.end_row();
    }

    Csv pooled{"pooled_mean_r", "bootstrap_error", "n_pooled", "min_sector_dim"};
    pooled.cell(ls.pooled_mean_r)
        .cell(ls.bootstrap_error)
        .cell(ls.n_pooled)
        .cell(ls.min_sector_dim);
    pooled.end_row();
    return {{"sectors.csv", sectors.text()}, {"pooled.csv", pooled.text()}};
}

FileList run_classical_growth(const json& params, std::uint64_t seed) {
    OscillatorParams p;
    p.n_osc = params.at("n_osc").get<int>();
    p.omega1 = params.at("omega1").get<double>();
    p.omega2 = params.at("omega2").get<double>();
    p.omega3 = params.at("omega3").get<double>();
    p.epsilon = params.at("epsilon").get<double>();

    const GrowthGrid grid = perturbation_growth(
        p, params.at("t_final").get<double>(), params.at("n_ensemble").get<int>(),
        seed, params.at("dt").get<double>(), params.at("n_samples").get<int>());
    const LyapunovEstimate est =
        lyapunov_estimate(grid, params.at("window_lo_factor").get<double>(),
                          params.at("window_hi").get<double>());

    Csv growth{"time", "site", "mean_abs_dq"};
    for (std::size_t i = 0; i < grid.times.size(); ++i)
        for (int r = 0; r < p.n_osc; ++r) {
            growth.cell(grid.times[i]).cell(r + 1).cell(grid.mean_abs_dq(r, i));
            growth.end_row();
        }

    Csv rates{"site", "rate", "r_squared"};
    for (std::size_t k = 0; k < est.fitted_sites.size(); ++k) {
        rates.cell(est.fitted_sites[k] + 1).cell(est.per_site[k]).cell(est.r_squared[k]);
        rates.end_row();
    }

    Csv summary{"name", "value"};
    const std::pair<const char*, double> entries[] = {
        {"pooled_rate", est.pooled},
        {"max_relative_spread", est.max_relative_spread},
        {"window_lo", est.window_lo},
        {"window_hi", est.window_hi},
        {"n_fitted_sites", double(est.fitted_sites.size())},
        {"dt_used", grid.dt_used},
    };
    for (const auto& [name, value] : entries) {
        summary.cell(std::string(name)).cell(value);
        summary.end_row();
    }
    return {{"growth.csv", growth.text()},
            {"lyapunov.csv", rates.text()},
            {"summary.csv", summary.text()}};
}

FileList run_validate(const json& params, std::uint64_t) {
    const std::vector<int> ids = params.at("criteria").get<std::vector<int>>();
    for (const int id : ids) validation_check_name(id);  // reject unknown ids early

    bool all_passed = true;
    Csv csv{"id", "name", "passed", "seconds", "details"};
    const std::vector<int> order = ids.empty() ? validation_check_ids() : ids;
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (const int id : sorted) {
        const CheckResult r = run_validation_check(id);
        std::puts(format_check_line(r).c_str());
        std::fflush(stdout);
        csv.cell(r.id).cell(r.name).cell(r.passed ? 1 : 0).cell(r.seconds).cell(
            r.details);
        csv.end_row();
        all_passed = all_passed && r.passed;
    }
    if (!all_passed) throw std::runtime_error("one or more validation checks failed");
    return {{"validation.csv", csv.text()}};
}

FileList run_point(const std::string& kind, const json& params, std::uint64_t seed) {
    if (kind == "markov-evolve") return run_markov_evolve(params, seed);
    if (kind == "fp-integrate") return run_fp_integrate(params, seed);
    if (kind == "circuit-mc") return run_circuit_mc(params, seed);
    if (kind == "otoc") return run_otoc(params, seed);
    if (kind == "entropy") return run_entropy(params, seed);
    if (kind == "level-stats") return run_level_stats(params, seed);
    if (kind == "classical-growth") return run_classical_growth(params, seed);
    if (kind == "validate") return run_validate(params, seed);
    throw std::logic_error("unhandled experiment kind " + kind);
}

std::uint64_t point_seed(std::uint64_t base, std::size_t index) {
    return splitmix64(splitmix64(base) + index + 1);
}

}  // namespace

std::vector<ExperimentInfo> experiment_catalog() {
    std::vector<ExperimentInfo> out;
    for (const KindSpec& kind : kind_specs()) {
        ExperimentInfo info;
        info.name = kind.name;
        info.summary = kind.summary;
        for (const FieldSpec& f : kind.fields) {
            std::string line = std::string(f.key) + " (" + type_name(f.type) + ", ";
            line += f.required ? "required" : std::string("default ") + f.fallback;
            line += "): ";
            line += f.help;
            info.parameter_help.push_back(line);
        }
        out.push_back(std::move(info));
    }
    return out;
}

std::filesystem::path output_root(const std::string& override_root) {
    if (!override_root.empty()) return override_root;
    if (const char* env = std::getenv(kOutputRootEnvVar); env && *env)
        return env;
    return std::filesystem::current_path();
}

void validate_config_text(const std::string& text) { parse_config(text); }

RunOutcome run_experiment(const std::filesystem::path& config_path,
                          const std::string& output_root_override) {
    RunOutcome out;

    std::string text;
    {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            out.message = "cannot read config file " + config_path.string();
            return out;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    ParsedConfig cfg;
    try {
        cfg = parse_config(text);
    } catch (const ConfigError& err) {
        out.message = err.what();
        return out;
    }

    out.output_dir = output_root(output_root_override) / cfg.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(out.output_dir, ec);
    if (ec) {
        out.message = "cannot create output directory " + out.output_dir.string() +
                      ": " + ec.message();
        return out;
    }

    // Resolve every sweep point up front; the first axis varies slowest.
    struct PointWork {
        json params;
        std::map<std::string, double> sweep_values;
        std::uint64_t seed = 0;
        FileList files;
        bool ok = false;
        std::string error;
    };
    std::vector<PointWork> work(cfg.n_points);
    for (std::size_t k = 0; k < cfg.n_points; ++k) {
        PointWork& w = work[k];
        w.params = cfg.fixed_params;
        std::size_t rem = k;
        for (auto it = cfg.sweep_axes.rbegin(); it != cfg.sweep_axes.rend(); ++it) {
            const json& values = it->second;
            const json& v = values[rem % values.size()];
            rem /= values.size();
            w.params[it->first] = v;
            w.sweep_values[it->first] = v.get<double>();
        }
        w.seed = point_seed(cfg.seed, k);
    }

    const std::string kind_name = cfg.kind->name;
    std::atomic<std::size_t> next{0};
    const unsigned n_threads = std::max(
        1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                               static_cast<unsigned>(cfg.n_points)));
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= work.size()) break;
            PointWork& w = work[k];
            try {
                w.files = run_point(kind_name, w.params, w.seed);
                w.ok = true;
            } catch (const std::exception& err) {
                w.error = err.what();
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    // Serial, ordered writes keep outputs byte-stable across thread counts.
    json manifest;
    manifest["schema_version"] = kManifestSchemaVersion;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["tool"] = "scramblesim";
    manifest["experiment"] = kind_name;
    json config_echo;
    config_echo["experiment"] = kind_name;
    config_echo["seed"] = cfg.seed;
    config_echo["output_dir"] = cfg.output_dir;
    config_echo["params"] = cfg.fixed_params;
    config_echo["sweep"] = json::object();
    for (const auto& [key, values] : cfg.sweep_axes) config_echo["sweep"][key] = values;
    manifest["config"] = config_echo;

    int n_failed = 0;
    json points = json::array();
    for (std::size_t k = 0; k < work.size(); ++k) {
        PointWork& w = work[k];
        PointOutcome outcome;
        outcome.index = static_cast<int>(k);
        outcome.sweep_values = w.sweep_values;
        outcome.seed = w.seed;
        outcome.ok = w.ok;
        outcome.error = w.error;

        char prefix[32];
        std::snprintf(prefix, sizeof prefix, "point%03zu_", k);
        for (const auto& [name, content] : w.files) {
            const std::string file_name = prefix + name;
            std::ofstream f(out.output_dir / file_name, std::ios::binary);
            f << content;
            if (!f) {
                outcome.ok = false;
                outcome.error = "failed writing " + file_name;
                break;
            }
            outcome.files.push_back(file_name);
        }

        json point;
        point["index"] = outcome.index;
        point["seed"] = outcome.seed;
        point["parameters"] = w.params;
        point["status"] = outcome.ok ? "ok" : "failed";
        if (!outcome.ok) {
            point["error"] = outcome.error;
            ++n_failed;
        }
        point["files"] = outcome.files;
        points.push_back(point);
        out.points.push_back(std::move(outcome));
    }
    manifest["points"] = points;
    manifest["n_points"] = work.size();
    manifest["n_failed"] = n_failed;

    {
        std::ofstream f(out.output_dir / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << "\n";
        if (!f) {
            out.message = "failed writing manifest.json";
            out.exit_code = 1;
            return out;
        }
    }

    out.exit_code = n_failed == 0 ? 0 : 1;
    char msg[160];
    std::snprintf(msg, sizeof msg, "%zu/%zu points ok; results in %s",
                  work.size() - n_failed, work.size(),
                  out.output_dir.string().c_str());
    out.message = msg;
    return out;
}

double collapse_check(const std::vector<CollapseCurve>& curves, int n_grid) {
    if (curves.size() < 2)
        throw std::invalid_argument("collapse_check needs at least two curves");
    if (n_grid < 2) throw std::invalid_argument("collapse_check needs n_grid >= 2");

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const CollapseCurve& c : curves) {
        if (c.g2t.size() != c.mean_weight_over_n.size() || c.g2t.size() < 2)
            throw std::invalid_argument("collapse_check: malformed curve");
        if (!std::is_sorted(c.g2t.begin(), c.g2t.end()))
            throw std::invalid_argument("collapse_check: g2t must be ascending");
        lo = std::max(lo, c.g2t.front());
        hi = std::min(hi, c.g2t.back());
    }
    if (!(lo < hi))
        throw std::invalid_argument("collapse_check: curves do not overlap in g2t");

    auto interpolate = [](const CollapseCurve& c, double x) {
        const auto it = std::lower_bound(c.g2t.begin(), c.g2t.end(), x);
        if (it == c.g2t.begin()) return c.mean_weight_over_n.front();
        if (it == c.g2t.end()) return c.mean_weight_over_n.back();
        const std::size_t j = static_cast<std::size_t>(it - c.g2t.begin());
        const double x0 = c.g2t[j - 1], x1 = c.g2t[j];
        const double f = x1 > x0 ? (x - x0) / (x1 - x0) : 0.0;
        return (1 - f) * c.mean_weight_over_n[j - 1] + f * c.mean_weight_over_n[j];
    };

    double worst = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double x = lo + (hi - lo) * i / (n_grid - 1);
        for (std::size_t a = 0; a < curves.size(); ++a)
            for (std::size_t b = a + 1; b < curves.size(); ++b)
                worst = std::max(worst, std::abs(interpolate(curves[a], x) -
                                                 interpolate(curves[b], x)));
    }
    return worst;
}

}  // namespace scramble
