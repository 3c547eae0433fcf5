#include "acs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace acs {

DegreeUnstable::DegreeUnstable(std::size_t a, std::size_t b)
    : NumericalError("degree unstable: independent seeds found " + std::to_string(a) + " and " +
                     std::to_string(b) + " points"),
      first(a), second(b)
{
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Yes:
        return "yes";
    case Verdict::No:
        return "no";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

bool FiberStatistics::constant_size() const
{
    return std::all_of(trials.begin(), trials.end(), [&](const FiberTrial& t) {
        return !t.positive_dimensional && t.complex_size == trials.front().complex_size;
    });
}

// ---------------------------------------------------------- recoverability

RecoverabilityResult is_generically_recoverable(const Model& model, const MeasurementMap& map, std::uint64_t seed)
{
    if (map.cols() != model.ambient_dim())
        throw std::invalid_argument("map domain dimension does not match the model's ambient dimension");
    const std::size_t d = model.dim();
    RecoverabilityResult out;
    out.seed = seed;

    if (!model.is_explicit()) {
        const auto& w = model.witness();
        if (!w)
            throw std::invalid_argument("implicit recoverability test needs a witness point");
        const std::size_t n = model.ambient_dim();
        const CMatrix jf = jacobian(model.equations()).evaluate(*w);
        const RankInfo frank = numerical_rank(jf);
        CMatrix stacked(map.rows() + jf.rows(), n);
        stacked << map.matrix(), jf;
        const RankInfo info = numerical_rank(stacked);
        out.required_rank = n;
        out.witnessed_rank = info.rank;
        out.singular_values = info.singular_values;
        out.ranks_tried = {info.rank};
        if (frank.rank != n - d) {
            out.verdict = Verdict::Inconclusive;
            out.note = "witness is a singular point of the model";
        } else {
            out.verdict = info.rank == n ? Verdict::Yes : Verdict::No;
        }
        return out;
    }

    out.required_rank = d;
    const PolyMatrix jac = jacobian(model.parameterization());
    Rng rng(seed);
    for (int k = 0; k < 10; ++k) {
        const CMatrix a = map.matrix() * jac.evaluate(sample_parameter(model, rng));
        RankInfo info = numerical_rank(a);
        out.ranks_tried.push_back(info.rank);
        if (out.ranks_tried.size() == 1 || info.rank > out.witnessed_rank) {
            out.witnessed_rank = info.rank;
            out.singular_values = std::move(info.singular_values);
        }
        if (out.witnessed_rank >= d)
            break;
    }
    out.verdict = out.witnessed_rank >= d ? Verdict::Yes : Verdict::No;
    if (out.verdict == Verdict::No)
        out.note = "Jacobian of the composed map stayed below rank d at every sampled point";
    return out;
}

std::vector<std::size_t> select_recoverable_coordinates(const Model& model, std::uint64_t seed)
{
    const std::size_t d = model.dim();
    const std::size_t n = model.ambient_dim();
    const PolyMatrix jac = jacobian(model.parameterization());
    Rng rng(seed);
    for (int attempt = 0; attempt < 10; ++attempt) {
        const CMatrix jt = jac.evaluate(sample_parameter(model, rng)).transpose();
        Eigen::ColPivHouseholderQR<CMatrix> qr(jt);
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < d && k < n; ++k)
            idx.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(k)));
        std::sort(idx.begin(), idx.end());
        const auto check = is_generically_recoverable(model, coordinate_projection(n, idx),
                                                      derive_seed(seed, 100 + attempt));
        if (check.verdict == Verdict::Yes)
            return idx;
    }
    throw NoSelectionFound("no recoverable coordinate selection found after 10 random draws");
}

// ------------------------------------------------------------ conditioning

ConditionResult condition_number_from_frame(const CMatrix& map_matrix, const CMatrix& tangent_basis)
{
    ConditionResult out;
    const std::size_t d = tangent_basis.cols();
    const CMatrix mq = map_matrix * tangent_basis;
    out.singular_values = Eigen::JacobiSVD<CMatrix>(mq).singularValues();
    if (d == 0) {
        out.kappa = 0.0;
        return out;
    }
    if (static_cast<std::size_t>(out.singular_values.size()) < d) {
        out.kappa = std::numeric_limits<double>::infinity();
        return out;
    }
    const double sd = out.singular_values(d - 1);
    out.kappa = sd < 1e-14 ? std::numeric_limits<double>::infinity() : 1.0 / sd;
    return out;
}

ConditionResult condition_number(const Model& model, const MeasurementMap& map, const CVector& point_or_param)
{
    if (map.cols() != model.ambient_dim())
        throw std::invalid_argument("map domain dimension does not match the model's ambient dimension");
    const TangentFrame frame = tangent_frame(model, point_or_param);
    return condition_number_from_frame(map.matrix(), frame.basis);
}

// ------------------------------------------------------------ fiber solving

namespace {

PolySystem random_slices(std::size_t nvars, std::size_t count, Rng& rng)
{
    std::vector<Polynomial> slices;
    for (std::size_t k = 0; k < count; ++k) {
        const CVector c = sample_gaussian_vector(nvars + 1, Field::Complex, rng);
        std::vector<Term> terms{Term{Monomial::one(nvars), c(nvars)}};
        for (std::size_t j = 0; j < nvars; ++j)
            terms.push_back(Term{Monomial::variable(nvars, j), c(j)});
        slices.emplace_back(nvars, std::move(terms));
    }
    return PolySystem(nvars, std::move(slices));
}

bool close_relative(const CVector& a, const CVector& b, double tol)
{
    const double scale = 1.0 + std::max(inf_norm(a), inf_norm(b));
    return inf_norm(a - b) <= tol * scale;
}

} // namespace

FiberResult fiber_solve(const Model& model, const MeasurementMap& map, const CVector& y, const TrackerConfig& cfg)
{
    const std::size_t d = model.dim();
    const PolySystem full = fiber_system(model, map, y);
    const std::size_t nvars = full.nvars();
    const std::size_t s = map.rows();
    Rng rng(derive_seed(cfg.seed, 0x5eed));

    FiberResult out;
    PolySystem square;
    if (model.is_explicit()) {
        if (s < d)
            throw PositiveDimensionalFiber("only " + std::to_string(s) + " measurements for a model of dimension " +
                                           std::to_string(d) + "; fibers are positive-dimensional");
        const auto rec = is_generically_recoverable(model, map, derive_seed(cfg.seed, 0x7ec));
        if (rec.verdict == Verdict::No)
            throw PositiveDimensionalFiber("the composed map has generic rank " +
                                           std::to_string(rec.witnessed_rank) + " < " + std::to_string(d) +
                                           "; fibers are positive-dimensional");
        // d equations from the measurements, l - d slices of the parameter fibers
        PolySystem measured = full;
        if (s > d)
            measured = compose_linear(full, sample_gaussian_matrix(d, s, Field::Complex, rng));
        out.slice_count = nvars - d;
        square = out.slice_count ? stack(measured, random_slices(nvars, out.slice_count, rng)) : measured;
    } else {
        if (full.size() < nvars)
            throw PositiveDimensionalFiber("fiber system has fewer equations than unknowns");
        square = full.size() > nvars
                     ? compose_linear(full, sample_gaussian_matrix(nvars, full.size(), Field::Complex, rng))
                     : full;
    }
    out.square_size = square.size();

    SolutionSet set = solve_system(square, cfg);
    const std::size_t stuck = set.n_singular + set.n_truncated;
    if (set.solutions.empty() && stuck > 0 && 2 * stuck > set.n_paths)
        throw PositiveDimensionalFiber(std::to_string(stuck) + " of " + std::to_string(set.n_paths) +
                                       " paths ended at singular or stalled points; "
                                       "positive-dimensional fiber suspected");

    // keep endpoints that solve the full (unsquared) system
    std::vector<PathResult> kept;
    for (auto& sol : set.solutions) {
        const double res = inf_norm(evaluate(full, sol.endpoint));
        if (res <= 1e-8 * (1.0 + inf_norm(sol.endpoint)))
            kept.push_back(std::move(sol));
        else
            ++out.n_filtered;
    }
    set.solutions = std::move(kept);
    set.n_real = static_cast<std::size_t>(
        std::count_if(set.solutions.begin(), set.solutions.end(), [](const PathResult& p) { return p.real; }));

    for (const auto& sol : set.solutions) {
        const CVector x = model.ambient_point(sol.endpoint);
        auto it = std::find_if(out.ambient.begin(), out.ambient.end(),
                               [&](const AmbientSolution& a) { return close_relative(a.point, x, 1e-6); });
        if (it != out.ambient.end()) {
            ++it->multiplicity;
            continue;
        }
        out.ambient.push_back(AmbientSolution{x, is_numerically_real(x, cfg.real_tol), 1, sol.endpoint});
    }
    out.solutions = std::move(set);
    return out;
}

FiberStatistics fiber_cardinality_experiment(const Model& model, std::size_t s, std::size_t trials,
                                             std::uint64_t seed, const TrackerConfig& base)
{
    const std::size_t n = model.ambient_dim();
    model.parameterization(); // explicit models only
    FiberStatistics stats;
    stats.s = s;
    for (std::size_t i = 0; i < trials; ++i) {
        FiberTrial trial;
        trial.seed = derive_seed(seed, i);
        Rng rng(trial.seed);
        const CVector t0 = sample_parameter(model, rng);
        const CVector x0 = model.ambient_point(t0);
        const MeasurementMap map = sample_generic_linear(n, s, model.field(), derive_seed(trial.seed, 1));
        const CVector y = map.apply(x0);
        TrackerConfig cfg = base;
        cfg.seed = derive_seed(trial.seed, 2);
        cfg.gamma = random_gamma(cfg.seed);
        try {
            const FiberResult fr = fiber_solve(model, map, y, cfg);
            trial.complex_size = fr.ambient.size();
            trial.real_size = static_cast<std::size_t>(
                std::count_if(fr.ambient.begin(), fr.ambient.end(), [](const AmbientSolution& a) { return a.real; }));
            trial.planted_recovered = std::any_of(fr.ambient.begin(), fr.ambient.end(), [&](const AmbientSolution& a) {
                return inf_norm(a.point - x0) <= 1e-6 * (1.0 + inf_norm(x0));
            });
            trial.n_diverged = fr.solutions.n_diverged;
            trial.n_paths = fr.solutions.n_paths;
        } catch (const PositiveDimensionalFiber&) {
            trial.positive_dimensional = true;
        }
        stats.trials.push_back(trial);
    }
    return stats;
}

std::size_t degree(const Model& model, const TrackerConfig& cfg, std::uint64_t seed)
{
    const std::size_t d = model.dim();
    const std::size_t n = model.ambient_dim();
    if (d == 0)
        return 1;
    auto count = [&](std::uint64_t sub) {
        Rng rng(sub);
        const MeasurementMap map = MeasurementMap::linear(sample_gaussian_matrix(d, n, Field::Complex, rng));
        const CVector y = sample_gaussian_vector(d, Field::Complex, rng);
        TrackerConfig c = cfg;
        c.seed = derive_seed(sub, 1);
        c.gamma = random_gamma(c.seed);
        return fiber_solve(model, map, y, c).ambient.size();
    };
    const std::size_t a = count(derive_seed(seed, 0));
    const std::size_t b = count(derive_seed(seed, 1));
    if (a != b)
        throw DegreeUnstable(a, b);
    return a;
}

IdentifiabilityBound everywhere_identifiability_bound(const Model& model, std::uint64_t seed)
{
    IdentifiabilityBound out;
    const std::size_t d = model.dim();
    Model diff = difference_model(model);
    out.difference_dim = dimension(diff, seed);
    out.s_min = 1 + out.difference_dim;
    out.universal_bound = 2 * d + 1;
    const auto& phi = model.parameterization();
    const bool linear = std::all_of(phi.begin(), phi.end(), [](const Polynomial& p) { return p.degree() <= 1; });
    if (linear)
        out.notes.push_back("model is an affine-linear space: s = d = " + std::to_string(d) +
                            " generic measurements already identify every point");
    return out;
}

std::vector<CVector> quotient_by_symmetry(const std::vector<CVector>& parameters, const SymmetryGroup& group,
                                          const Model& model)
{
    const PolySystem& phi = model.parameterization();
    Rng rng(0x5e3);
    for (const auto& g : group.generators) {
        if (g.perm.size() != phi.nvars())
            throw std::invalid_argument("symmetry generator does not match the parameter count");
        for (int k = 0; k < 3; ++k) {
            const CVector t = sample_gaussian_vector(phi.nvars(), Field::Real, rng);
            const CVector x = evaluate(phi, t);
            if (inf_norm(evaluate(phi, g.apply(t)) - x) > 1e-12 * (1.0 + inf_norm(x)))
                throw std::invalid_argument("symmetry generator does not leave the parameterization invariant");
        }
    }
    std::vector<CVector> out;
    for (const auto& t : parameters) {
        const CVector x = evaluate(phi, t);
        const bool dup = std::any_of(out.begin(), out.end(), [&](const CVector& o) { return close_relative(o, x, 1e-6); });
        if (!dup)
            out.push_back(x);
    }
    return out;
}

} // namespace acs
