#include "acs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acs {

namespace {

CVector real_vector(std::initializer_list<double> values)
{
    CVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values)
        v(i++) = x;
    return v;
}

json real_array(const Eigen::VectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

json kappa_json(double k)
{
    return std::isfinite(k) ? json(k) : json(nullptr);
}

} // namespace

Tensor432Fixture tensor432_fixture()
{
    Tensor432Fixture f;
    f.dims = {4, 3, 2};
    f.observed = {0, 2, 3, 6, 7, 10, 11, 13, 15, 16, 18, 19, 21, 23};
    f.values = real_vector({-32, -24, 72, -104, 40, 16, 0, 10, -57, 27, -11, 1, -1, -7});
    f.planted_parameter = real_vector({-1, -6, 2, 2, 1, 3, -2, 1, 3, -1, 8, -4, -8, -3});
    // slice k = 0 rows, then slice k = 1 rows
    f.displayed_t1 = real_vector({-32, 8, -24, 72, -40, -56, -104, 40, -8, -40, 16, 0,
                                  -26, 10, -2, -57, 27, 21, -11, 1, -17, -1, -1, -7});
    f.displayed_t2 = real_vector({-32, 411.518, -24, 72, 1112.908, 1075.769, -104, 40, -728.216, -1.114, 16, 0,
                                  -26, 10, -182.054, -57, 27, -396.574, -11, 1, -78.642, -1, 0.389, -7});
    f.kappa_t1 = 11.642;
    f.kappa_t2 = 1907.954;
    f.shared_index = tensor_index(f.dims, {0, 0, 1});
    f.shared_value = -26.0;
    return f;
}

Model tensor432_model()
{
    Model m = build_cp_tensor({4, 3, 2}, 2, true);
    dimension(m, 0);
    return m;
}

MeasurementMap tensor432_map()
{
    return coordinate_projection(24, tensor432_fixture().observed);
}

TrackerConfig tensor432_config(std::uint64_t seed, unsigned threads)
{
    TrackerConfig cfg = TrackerConfig::with_seed(seed);
    cfg.threads = threads;
    // every solution of the problem is far below this norm
    cfg.max_norm = 1e6;
    return cfg;
}

Tensor432Result run_tensor432(std::uint64_t seed, unsigned threads)
{
    const Tensor432Fixture fx = tensor432_fixture();
    const Model model = tensor432_model();
    const MeasurementMap map = tensor432_map();

    Tensor432Result out;
    out.seed = seed;
    out.fiber = fiber_solve(model, map, fx.values, tensor432_config(seed, threads));
    out.n_real_parameter_solutions = out.fiber.solutions.n_real;

    // the model is real: completions are the real parameter solutions modulo symmetry
    std::vector<CVector> params;
    for (const auto& s : out.fiber.solutions.solutions)
        if (s.real)
            params.push_back(s.endpoint.real().cast<cplx>());
    const std::vector<CVector> distinct = quotient_by_symmetry(params, model.symmetry(), model);
    for (const auto& x : distinct) {
        TensorCompletion c;
        c.tensor = x;
        c.real = true;
        for (const auto& t : params) {
            const CVector xt = model.ambient_point(t);
            if (inf_norm(xt - x) <= 1e-6 * (1.0 + inf_norm(x))) {
                if (c.multiplicity++ == 0)
                    c.parameter = t;
            }
        }
        c.condition = condition_number(model, map, c.parameter);
        out.completions.push_back(std::move(c));
    }
    std::stable_sort(out.completions.begin(), out.completions.end(),
                     [](const TensorCompletion& a, const TensorCompletion& b) {
                         return a.condition.kappa < b.condition.kappa;
                     });
    for (const auto& c : out.completions)
        out.shared_entry.push_back(c.tensor(static_cast<Eigen::Index>(fx.shared_index)).real());
    return out;
}

SweepResult run_fiber_sweep(const std::string& name, Model model, std::size_t trials, std::uint64_t seed,
                            const TrackerConfig& base)
{
    SweepResult out;
    out.name = name;
    out.seed = seed;
    out.model_dim = dimension(model, derive_seed(seed, 0));
    out.ambient_dim = model.ambient_dim();
    const std::size_t d = out.model_dim;
    out.degree = degree(model, base, derive_seed(seed, 1));

    const std::size_t first = d > 0 ? d - 1 : 0;
    for (std::size_t s = first; s <= d + 1; ++s) {
        SweepRow row;
        row.s = s;
        row.trials = trials;
        const std::uint64_t row_seed = derive_seed(seed, 10 + s);
        if (s < d) {
            row.regime = "s<d";
            row.prediction = "not recoverable";
            // with no measurements at all the rank is 0 < d and there is no map to sample
            for (std::size_t i = 0; i < trials && s > 0; ++i) {
                const std::uint64_t ts = derive_seed(row_seed, i);
                const MeasurementMap map = sample_generic_linear(out.ambient_dim, s, model.field(), ts);
                if (is_generically_recoverable(model, map, derive_seed(ts, 1)).verdict != Verdict::No)
                    ++row.recoverable_trials;
            }
            row.matches_prediction = row.recoverable_trials == 0;
        } else {
            row.statistics = fiber_cardinality_experiment(model, s, trials, row_seed, base);
            const auto& ts = row.statistics.trials;
            if (s == d) {
                row.regime = "s=d";
                row.prediction = "finite fibers of size " + std::to_string(out.degree);
                row.matches_prediction = std::all_of(ts.begin(), ts.end(), [&](const FiberTrial& t) {
                    return !t.positive_dimensional && t.complex_size == out.degree && t.planted_recovered;
                });
            } else {
                row.regime = "s>d";
                row.prediction = "planted point only";
                row.matches_prediction = std::all_of(ts.begin(), ts.end(), [](const FiberTrial& t) {
                    return !t.positive_dimensional && t.complex_size == 1 && t.planted_recovered;
                });
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

SweepResult run_named_sweep(const std::string& name, std::size_t trials, std::uint64_t seed, unsigned threads)
{
    TrackerConfig base = TrackerConfig::with_seed(seed);
    base.threads = threads;
    if (name == "twisted-cubic-sweep")
        return run_fiber_sweep(name, build_twisted_cubic(3), trials, seed, base);
    if (name == "rank1-sweep")
        return run_fiber_sweep(name, build_low_rank_matrix(2, 3, 1), trials, seed, base);
    throw std::invalid_argument("unknown experiment: " + name);
}

json tensor432_to_json(const Tensor432Result& r)
{
    const auto& set = r.fiber.solutions;
    json params = json::array();
    for (const auto& s : set.solutions)
        params.push_back({{"parameter", vector_to_json(s.endpoint)},
                          {"residual", s.residual},
                          {"real", s.real}});
    json completions = json::array();
    for (const auto& c : r.completions)
        completions.push_back({{"tensor", vector_to_json(c.tensor)},
                               {"parameter", vector_to_json(c.parameter)},
                               {"multiplicity", c.multiplicity},
                               {"real", c.real},
                               {"kappa", kappa_json(c.condition.kappa)},
                               {"singular_values", real_array(c.condition.singular_values)}});
    return json{{"experiment", "tensor432"},
                {"seed", r.seed},
                {"bezout_bound", set.bezout_bound},
                {"n_paths", set.n_paths},
                {"n_diverged", set.n_diverged},
                {"n_truncated", set.n_truncated},
                {"n_singular", set.n_singular},
                {"n_filtered", r.fiber.n_filtered},
                {"n_parameter_solutions", set.solutions.size()},
                {"n_real_parameter_solutions", r.n_real_parameter_solutions},
                {"parameter_solutions", std::move(params)},
                {"n_complex_ambient_points", r.fiber.ambient.size()},
                {"n_distinct_tensors", r.completions.size()},
                {"completions", std::move(completions)},
                {"shared_entry", r.shared_entry}};
}

json sweep_to_json(const SweepResult& r)
{
    json rows = json::array();
    for (const auto& row : r.rows) {
        json trials = json::array();
        for (const auto& t : row.statistics.trials)
            trials.push_back({{"seed", t.seed},
                              {"complex_size", t.complex_size},
                              {"real_size", t.real_size},
                              {"planted_recovered", t.planted_recovered},
                              {"positive_dimensional", t.positive_dimensional},
                              {"n_paths", t.n_paths},
                              {"n_diverged", t.n_diverged}});
        json jr{{"s", row.s},
                {"regime", row.regime},
                {"prediction", row.prediction},
                {"trials", row.trials},
                {"matches_prediction", row.matches_prediction}};
        if (row.regime == "s<d")
            jr["recoverable_trials"] = row.recoverable_trials;
        else
            jr["fibers"] = std::move(trials);
        rows.push_back(std::move(jr));
    }
    return json{{"experiment", r.name},
                {"seed", r.seed},
                {"model_dim", r.model_dim},
                {"ambient_dim", r.ambient_dim},
                {"degree", r.degree},
                {"rows", std::move(rows)}};
}

} // namespace acs
