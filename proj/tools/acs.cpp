#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acs/experiments.hpp"

using namespace acs;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string manifest;
};

struct RunInfo {
    std::string command;
    std::vector<std::string> inputs;
    json overrides = json::object();
};

/// A vector file is either a bare JSON array or an object holding the array
/// under `key`.
CVector read_vector_file(const std::string& path, const char* key)
{
    const json j = read_json_file(path);
    if (j.is_array())
        return vector_from_json(j);
    if (j.is_object() && j.contains(key))
        return vector_from_json(j.at(key));
    throw std::invalid_argument(path + ": expected an array or an object with \"" + key + "\"");
}

void emit(const json& j, const std::string& out)
{
    if (out.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_json_file(out, j);
}

std::string fmt3(double x)
{
    if (!std::isfinite(x))
        return x > 0 ? "inf" : "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string fmt3(cplx z)
{
    if (std::abs(z.imag()) <= 5e-4 * (1.0 + std::abs(z.real())))
        return fmt3(z.real());
    return fmt3(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt3(std::abs(z.imag())) + "i";
}

std::string row(const CVector& v)
{
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        s += (i ? " " : "") + fmt3(v(i));
    return s;
}

void check_shapes(const Model& model, const MeasurementMap& map)
{
    if (map.cols() != model.ambient_dim())
        throw std::invalid_argument("map acts on " + std::to_string(map.cols()) +
                                    " coordinates but the model lives in dimension " +
                                    std::to_string(model.ambient_dim()));
}

TrackerConfig tracker_config(const Common& c)
{
    TrackerConfig cfg = TrackerConfig::with_seed(c.seed);
    cfg.threads = c.threads;
    return cfg;
}

// ------------------------------------------------------------------ analyze

struct AnalyzeArgs {
    std::string model, map, witness, point, report;
    bool fiber = false;
    bool degree = false;
};

void cmd_analyze(const AnalyzeArgs& a, const Common& c, RunInfo& info)
{
    info.inputs = {a.model, a.map};
    Model model = model_from_json(read_json_file(a.model));
    const MeasurementMap map = map_from_json(read_json_file(a.map));
    check_shapes(model, map);
    if (!a.witness.empty()) {
        info.inputs.push_back(a.witness);
        model = Model::from_equations(model.equations(), read_vector_file(a.witness, "witness"), model.field());
    }

    WellPosednessReport rep;
    rep.seed = c.seed;
    rep.n_measurements = map.rows();
    rep.model_dim = model.cached_dimension() ? *model.cached_dimension() : dimension(model, derive_seed(c.seed, 0));
    rep.recoverable = is_generically_recoverable(model, map, derive_seed(c.seed, 1));

    if (model.is_explicit()) {
        rep.bound = everywhere_identifiability_bound(model, derive_seed(c.seed, 2));
        if (model.symmetry().empty())
            rep.notes.push_back("no symmetry group declared; fiber sizes are counted in ambient space");
    }

    if (rep.recoverable.verdict == Verdict::No) {
        rep.identifiability = Verdict::No;
        rep.notes.push_back("fibers of a generic point are positive-dimensional, so the map is not identifiable");
    } else if (a.fiber && model.is_explicit()) {
        Rng rng(derive_seed(c.seed, 3));
        const CVector t0 = sample_parameter(model, rng);
        TrackerConfig cfg = tracker_config(c);
        cfg.seed = derive_seed(c.seed, 4);
        cfg.gamma = random_gamma(cfg.seed);
        const FiberResult fr = fiber_solve(model, map, map.apply(model.ambient_point(t0)), cfg);
        rep.fiber_size = fr.ambient.size();
        rep.identifiability = fr.ambient.size() == 1 ? Verdict::Yes : Verdict::No;
        rep.notes.push_back("identifiability evidence: fiber of a planted generic point solved over C");
    } else {
        rep.notes.push_back("identifiability not tested; pass --fiber to solve the fiber of a generic point");
    }

    if (!a.point.empty()) {
        info.inputs.push_back(a.point);
        rep.condition = condition_number(model, map, read_vector_file(a.point, "point"));
    }
    if (a.degree) {
        if (!model.is_explicit())
            throw std::invalid_argument("--degree needs an explicit model");
        rep.degree = degree(model, tracker_config(c), derive_seed(c.seed, 5));
    }

    const json j = report_to_json(rep);
    if (a.report.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    write_json_file(a.report, j);
    std::printf("dimension d          %zu\n", rep.model_dim);
    std::printf("measurements s       %zu\n", rep.n_measurements);
    std::printf("recoverable          %s (rank %zu of %zu)\n", to_string(rep.recoverable.verdict).c_str(),
                rep.recoverable.witnessed_rank, rep.recoverable.required_rank);
    std::printf("identifiable         %s\n", to_string(rep.identifiability).c_str());
    if (rep.fiber_size)
        std::printf("fiber size           %zu\n", *rep.fiber_size);
    if (rep.bound)
        std::printf("s_min (everywhere)   %zu   (2d+1 = %zu)\n", rep.bound->s_min, rep.bound->universal_bound);
    if (rep.condition)
        std::printf("condition number     %s\n", fmt3(rep.condition->kappa).c_str());
    if (rep.degree)
        std::printf("degree               %zu\n", *rep.degree);
}

// -------------------------------------------------------------------- solve

struct SolveArgs {
    std::string model, map, y, symmetry, out;
};

void cmd_solve(const SolveArgs& a, const Common& c, RunInfo& info)
{
    info.inputs = {a.model, a.map, a.y};
    Model model = model_from_json(read_json_file(a.model));
    const MeasurementMap map = map_from_json(read_json_file(a.map));
    check_shapes(model, map);
    const CVector y = read_vector_file(a.y, "y");
    if (static_cast<std::size_t>(y.size()) != map.rows())
        throw std::invalid_argument("measurement vector has " + std::to_string(y.size()) + " entries, map has " +
                                    std::to_string(map.rows()) + " rows");
    if (!a.symmetry.empty()) {
        info.inputs.push_back(a.symmetry);
        model.set_symmetry(symmetry_from_json(read_json_file(a.symmetry)));
    }
    if (!model.cached_dimension())
        dimension(model, derive_seed(c.seed, 0));

    const FiberResult fr = fiber_solve(model, map, y, tracker_config(c));
    json j = solution_set_to_json(fr.solutions);
    j["seed"] = c.seed;
    j["n_filtered"] = fr.n_filtered;
    j["slice_count"] = fr.slice_count;

    json ambient = json::array();
    for (const auto& p : fr.ambient) {
        json e{{"point", vector_to_json(p.point)}, {"real", p.real}, {"multiplicity", p.multiplicity}};
        try {
            const ConditionResult cr = condition_number(model, map, model.is_explicit() ? p.parameter : p.point);
            e["kappa"] = std::isfinite(cr.kappa) ? json(cr.kappa) : json(nullptr);
        } catch (const SingularPoint&) {
            e["kappa"] = nullptr;
        }
        ambient.push_back(std::move(e));
    }
    j["ambient"] = std::move(ambient);

    if (model.is_explicit()) {
        std::vector<CVector> params;
        for (const auto& s : fr.solutions.solutions)
            params.push_back(s.endpoint);
        if (model.symmetry().empty()) {
            j["warning"] = "no symmetry group declared; parameter solutions are reported without a quotient";
        } else {
            j["n_distinct_after_symmetry"] = quotient_by_symmetry(params, model.symmetry(), model).size();
        }
    }

    if (a.out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    write_json_file(a.out, j);
    std::printf("%zu solutions (%zu real) from %zu paths; %zu distinct ambient points\n",
                fr.solutions.solutions.size(), fr.solutions.n_real, fr.solutions.n_paths, fr.ambient.size());
    for (const auto& e : j["ambient"]) {
        const CVector p = vector_from_json(e["point"]);
        std::printf("  [%s]  kappa %s\n", row(p).c_str(),
                    e["kappa"].is_null() ? "inf" : fmt3(e["kappa"].get<double>()).c_str());
    }
}

// --------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string name, out;
    std::size_t trials = 20;
};

void print_tensor(const CVector& t)
{
    for (int i = 0; i < 4; ++i) {
        std::string line;
        for (int k = 0; k < 2; ++k) {
            for (int j = 0; j < 3; ++j) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%10s", fmt3(t(k * 12 + i * 3 + j)).c_str());
                line += buf;
            }
            line += k == 0 ? "  |" : "";
        }
        std::printf("  %s\n", line.c_str());
    }
}

void cmd_experiment(const ExperimentArgs& a, const Common& c, RunInfo& info)
{
    info.overrides["trials"] = a.trials;
    if (a.name == "tensor432") {
        const Tensor432Result r = run_tensor432(c.seed, c.threads);
        const json j = tensor432_to_json(r);
        if (!a.out.empty())
            write_json_file(a.out, j);
        else
            std::cout << j.dump(2) << '\n';
        if (a.out.empty())
            return;
        const auto& set = r.fiber.solutions;
        std::printf("paths %zu, diverged %zu, truncated %zu\n", set.n_paths, set.n_diverged, set.n_truncated);
        std::printf("%zu real solutions, %zu distinct tensors\n", r.n_real_parameter_solutions, r.completions.size());
        for (std::size_t k = 0; k < r.completions.size(); ++k) {
            std::printf("T%zu  kappa %s  entry (1,1,2) = %.12g\n", k + 1,
                        fmt3(r.completions[k].condition.kappa).c_str(), r.shared_entry[k]);
            print_tensor(r.completions[k].tensor);
        }
        return;
    }
    const SweepResult r = run_named_sweep(a.name, a.trials, c.seed, c.threads);
    const json j = sweep_to_json(r);
    if (a.out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    write_json_file(a.out, j);
    std::printf("%s: d = %zu, n = %zu, degree = %zu\n", r.name.c_str(), r.model_dim, r.ambient_dim, r.degree);
    std::printf("  %4s  %-5s  %-28s  %-22s  %s\n", "s", "", "prediction", "observed", "match");
    for (const auto& row : r.rows) {
        std::string observed;
        if (row.regime == "s<d") {
            observed = std::to_string(row.trials - row.recoverable_trials) + "/" + std::to_string(row.trials) +
                       " not recoverable";
        } else {
            std::size_t lo = SIZE_MAX, hi = 0, planted = 0;
            for (const auto& t : row.statistics.trials) {
                lo = std::min(lo, t.complex_size);
                hi = std::max(hi, t.complex_size);
                planted += t.planted_recovered ? 1 : 0;
            }
            observed = "sizes " + std::to_string(lo) + ".." + std::to_string(hi) + ", planted " +
                       std::to_string(planted) + "/" + std::to_string(row.trials);
        }
        std::printf("  %4zu  %-5s  %-28s  %-22s  %s\n", row.s, row.regime.c_str(), row.prediction.c_str(),
                    observed.c_str(), row.matches_prediction ? "yes" : "no");
    }
}

// -------------------------------------------------------------- build-model

struct BuildArgs {
    std::string kind, model, out;
    std::size_t m = 2, n = 3, r = 1;
    std::vector<std::size_t> dims;
    bool normalized = false;
    std::string field = "real";
};

void cmd_build_model(const BuildArgs& a, RunInfo& info)
{
    std::optional<Model> model;
    if (a.kind == "low-rank-matrix") {
        model = build_low_rank_matrix(a.m, a.n, a.r);
    } else if (a.kind == "cp-tensor") {
        if (a.dims.empty())
            throw std::invalid_argument("cp-tensor needs --dims");
        model = build_cp_tensor(a.dims, a.r, a.normalized);
    } else if (a.kind == "twisted-cubic") {
        model = build_twisted_cubic(a.n);
    } else if (a.kind == "veronese" || a.kind == "difference") {
        if (a.model.empty())
            throw std::invalid_argument(a.kind + " needs --model");
        info.inputs.push_back(a.model);
        const Model base = model_from_json(read_json_file(a.model));
        model = a.kind == "veronese" ? veronese_lift(base, static_cast<unsigned>(a.r)) : difference_model(base);
    } else {
        throw std::invalid_argument("unknown model kind: " + a.kind);
    }
    if (a.field != "real") {
        const Field f = field_from_string(a.field);
        model = Model::from_parameterization(model->parameterization(), f, model->symmetry());
    }
    emit(model_to_json(*model), a.out);
}

// --------------------------------------------------------------- sample-map

struct MapArgs {
    std::string kind = "linear", out, field = "real";
    std::size_t n = 0, s = 0;
    std::vector<std::size_t> indices;
};

void cmd_sample_map(const MapArgs& a, const Common& c)
{
    if (a.kind == "linear") {
        if (a.n == 0 || a.s == 0)
            throw std::invalid_argument("linear maps need --n and --s");
        emit(map_to_json(sample_generic_linear(a.n, a.s, field_from_string(a.field), c.seed)), a.out);
    } else if (a.kind == "projection") {
        std::vector<std::size_t> idx;
        for (std::size_t i : a.indices) {
            if (i == 0)
                throw std::invalid_argument("projection indices are 1-based");
            idx.push_back(i - 1);
        }
        emit(map_to_json(coordinate_projection(a.n, idx)), a.out);
    } else {
        throw std::invalid_argument("unknown map kind: " + a.kind);
    }
}

std::uint64_t default_seed()
{
    const char* env = std::getenv("ACS_SEED");
    if (!env || !*env)
        return 0;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("ACS_SEED is not an integer: ") + env);
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Well-posedness analysis of algebraic inverse problems"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);

    Common common;
    try {
        common.seed = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    app.add_option("--seed", common.seed, "master seed (default: $ACS_SEED or 0)");
    app.add_option("--threads", common.threads, "worker threads for path tracking (0: all cores)");
    app.add_option("--manifest", common.manifest, "write a run manifest to this file");

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "recoverability, identifiability and conditioning report");
    analyze->add_option("model", an.model, "model JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("map", an.map, "measurement map JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("--witness", an.witness, "witness point for implicit models")->check(CLI::ExistingFile);
    analyze->add_option("--point", an.point, "parameter (explicit) or point (implicit) for the condition number")
        ->check(CLI::ExistingFile);
    analyze->add_option("--report", an.report, "write the JSON report here");
    analyze->add_flag("--fiber", an.fiber, "solve the fiber of a generic point as identifiability evidence");
    analyze->add_flag("--degree", an.degree, "compute the degree of the model");

    SolveArgs so;
    auto* solve = app.add_subcommand("solve", "solve mu(x) = y on the model");
    solve->add_option("model", so.model, "model JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("map", so.map, "measurement map JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("y", so.y, "measurement vector JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("--symmetry", so.symmetry, "symmetry group JSON")->check(CLI::ExistingFile);
    solve->add_option("--out", so.out, "write the solution JSON here");

    ExperimentArgs ex;
    auto* experiment = app.add_subcommand("experiment", "built-in experiments");
    experiment->add_option("name", ex.name, "tensor432 | twisted-cubic-sweep | rank1-sweep")->required();
    experiment->add_option("--trials", ex.trials, "trials per row of a sweep");
    experiment->add_option("--out", ex.out, "write the JSON report here");

    BuildArgs bu;
    auto* build = app.add_subcommand("build-model", "write a model JSON");
    build->add_option("kind", bu.kind, "low-rank-matrix | cp-tensor | twisted-cubic | veronese | difference")
        ->required();
    build->add_option("--m", bu.m, "rows");
    build->add_option("--n", bu.n, "columns, or ambient dimension of the twisted cubic");
    build->add_option("--r", bu.r, "rank, or Veronese degree");
    build->add_option("--dims", bu.dims, "tensor dimensions")->delimiter(',');
    build->add_flag("--normalized", bu.normalized, "fix the last coordinate of all but the last factor to 1");
    build->add_option("--model", bu.model, "base model for veronese and difference")->check(CLI::ExistingFile);
    build->add_option("--field", bu.field, "real | complex");
    build->add_option("--out", bu.out, "output file (default: stdout)");

    MapArgs ma;
    auto* sample = app.add_subcommand("sample-map", "write a measurement map JSON");
    sample->add_option("kind", ma.kind, "linear | projection");
    sample->add_option("--n", ma.n, "ambient dimension")->required();
    sample->add_option("--s", ma.s, "number of measurements");
    sample->add_option("--indices", ma.indices, "1-based coordinates for a projection")->delimiter(',');
    sample->add_option("--field", ma.field, "real | complex");
    sample->add_option("--out", ma.out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunInfo info;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (analyze->parsed()) {
            info.command = "analyze";
            cmd_analyze(an, common, info);
        } else if (solve->parsed()) {
            info.command = "solve";
            cmd_solve(so, common, info);
        } else if (experiment->parsed()) {
            info.command = "experiment " + ex.name;
            cmd_experiment(ex, common, info);
        } else if (build->parsed()) {
            info.command = "build-model " + bu.kind;
            cmd_build_model(bu, info);
        } else if (sample->parsed()) {
            info.command = "sample-map " + ma.kind;
            cmd_sample_map(ma, common);
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (!common.manifest.empty()) {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json m{{"command", info.command},
               {"seed", common.seed},
               {"threads", common.threads},
               {"inputs", info.inputs},
               {"overrides", info.overrides},
               {"version", kVersion},
               {"wall_time_seconds", wall}};
        try {
            write_json_file(common.manifest, m);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
    }
    return 0;
}
