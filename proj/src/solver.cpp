#include "acs/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace acs {

cplx random_gamma(std::uint64_t seed)
{
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    constexpr double quarter = std::numbers::pi / 2.0;
    for (;;) {
        const double a = angle(rng);
        const double r = std::fmod(a, quarter);
        if (r > 1e-3 && quarter - r > 1e-3)
            return std::polar(1.0, a);
    }
}

TrackerConfig TrackerConfig::with_seed(std::uint64_t seed)
{
    TrackerConfig cfg;
    cfg.seed = seed;
    cfg.gamma = random_gamma(seed);
    return cfg;
}

void TrackerConfig::validate() const
{
    if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= 1.0))
        throw std::invalid_argument("tracker steps must satisfy 0 < min_step <= initial_step <= 1");
    if (!(newton_tol > 0 && endpoint_tol > 0 && dedup_tol > 0 && real_tol > 0 && corrector_tol > 0))
        throw std::invalid_argument("tracker tolerances must be positive");
    if (std::abs(std::abs(gamma) - 1.0) > 1e-12)
        throw std::invalid_argument("gamma must have unit modulus");
    if (max_newton_iters == 0 || corrector_iters == 0 || max_steps == 0)
        throw std::invalid_argument("iteration limits must be positive");
}

std::string to_string(PathStatus s)
{
    switch (s) {
    case PathStatus::Converged:
        return "converged";
    case PathStatus::Diverged:
        return "diverged";
    case PathStatus::Truncated:
        return "truncated";
    }
    return "unknown";
}

// ------------------------------------------------------------ start system

std::size_t TotalDegreeStart::root_count() const
{
    std::size_t b = 1;
    for (auto d : degrees)
        b *= d;
    return b;
}

CVector TotalDegreeStart::root(std::size_t index) const
{
    const std::size_t n = degrees.size();
    CVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        const unsigned d = degrees[i];
        const std::size_t k = index % d;
        index /= d;
        x(i) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / d);
    }
    return x;
}

std::vector<CVector> TotalDegreeStart::roots() const
{
    std::vector<CVector> all;
    const std::size_t count = root_count();
    all.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        all.push_back(root(i));
    return all;
}

TotalDegreeStart total_degree_start(const PolySystem& target)
{
    const std::size_t n = target.nvars();
    if (target.size() != n)
        throw std::invalid_argument("total-degree start needs a square system, got " + std::to_string(target.size()) +
                                    " equations in " + std::to_string(n) + " variables");
    TotalDegreeStart start;
    start.degrees = target.degrees();
    std::vector<Polynomial> g;
    for (std::size_t i = 0; i < n; ++i) {
        if (start.degrees[i] == 0)
            throw std::invalid_argument("equation " + std::to_string(i) + " has degree zero");
        g.emplace_back(n, std::vector<Term>{Term{Monomial::variable(n, i, start.degrees[i]), cplx(1.0)},
                                            Term{Monomial::one(n), cplx(-1.0)}});
    }
    start.system = PolySystem(n, std::move(g));
    return start;
}

// ------------------------------------------------------------------ Newton

bool is_singular_jacobian(const CMatrix& jac)
{
    if (jac.size() == 0)
        return false;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(jac).singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    return !(smax > 0.0) || smin <= 1e-8 * smax;
}

namespace {

bool all_finite(const CVector& v)
{
    return v.allFinite();
}

bool factor_ok(const Eigen::PartialPivLU<CMatrix>& lu)
{
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    return diag.allFinite() && diag.minCoeff() > 0.0;
}

PathResult newton_with(SystemEvaluator& eval, CVector x, double tol, unsigned max_iters)
{
    PathResult out;
    CVector f;
    CMatrix jac;
    Eigen::PartialPivLU<CMatrix> lu;
    eval.values_and_jacobian(x, f, jac);
    double res = inf_norm(f);
    unsigned it = 0;
    out.status = PathStatus::Truncated;
    for (;;) {
        if (res <= tol * (1.0 + inf_norm(x))) {
            out.status = PathStatus::Converged;
            break;
        }
        if (it >= max_iters)
            break;
        ++it;
        lu.compute(jac);
        if (!factor_ok(lu) || lu.rcond() < 1e-15)
            break; // singular Jacobian
        const CVector dx = lu.solve(-f);
        if (!all_finite(dx))
            break;
        // residuals of high-degree equations far from the origin bottom out
        // above tol, so a tiny Newton correction counts as converged too
        if (inf_norm(dx) <= tol * (1.0 + inf_norm(x))) {
            x += dx;
            eval.values_and_jacobian(x, f, jac);
            res = inf_norm(f);
            out.status = PathStatus::Converged;
            break;
        }
        // backtracking on the residual
        double alpha = 1.0;
        CVector xn;
        CVector fn;
        double rn = 0.0;
        bool improved = false;
        for (int k = 0; k < 20; ++k) {
            xn = x + alpha * dx;
            eval.values(xn, fn);
            rn = inf_norm(fn);
            if (std::isfinite(rn) && rn < res) {
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!improved)
            break; // stagnated at the rounding floor
        x = std::move(xn);
        eval.values_and_jacobian(x, f, jac);
        res = inf_norm(f);
    }
    out.endpoint = std::move(x);
    out.residual = res;
    out.steps = it;
    out.singular = is_singular_jacobian(jac);
    return out;
}

/// Dense LU with partial pivoting on |.|^2, for the small square systems
/// seen during tracking. Storage is reused between factorizations.
class DenseLU {
public:
    explicit DenseLU(std::size_t n) : n_(n), a_(n * n), piv_(n) {}

    bool factor(const CMatrix& m)
    {
        // row-major copy
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                a_[i * n_ + j] = m(i, j);
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t p = k;
            double best = std::norm(a_[k * n_ + k]);
            for (std::size_t i = k + 1; i < n_; ++i) {
                const double v = std::norm(a_[i * n_ + k]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (!(best > 0.0) || !std::isfinite(best))
                return false;
            piv_[k] = p;
            if (p != k)
                std::swap_ranges(&a_[k * n_], &a_[k * n_] + n_, &a_[p * n_]);
            const cplx inv = 1.0 / a_[k * n_ + k];
            for (std::size_t i = k + 1; i < n_; ++i) {
                cplx* row = &a_[i * n_];
                const cplx l = row[k] * inv;
                row[k] = l;
                if (l == cplx(0.0))
                    continue;
                const cplx* prow = &a_[k * n_];
                for (std::size_t j = k + 1; j < n_; ++j)
                    row[j] -= l * prow[j];
            }
        }
        return true;
    }

    /// x = A^{-1} b
    void solve(const CVector& b, CVector& x) const
    {
        x = b;
        for (std::size_t k = 0; k < n_; ++k)
            if (piv_[k] != k)
                std::swap(x(k), x(piv_[k]));
        for (std::size_t i = 1; i < n_; ++i) {
            cplx s = x(i);
            for (std::size_t j = 0; j < i; ++j)
                s -= a_[i * n_ + j] * x(j);
            x(i) = s;
        }
        for (std::size_t i = n_; i-- > 0;) {
            cplx s = x(i);
            for (std::size_t j = i + 1; j < n_; ++j)
                s -= a_[i * n_ + j] * x(j);
            x(i) = s / a_[i * n_ + i];
        }
    }

private:
    std::size_t n_;
    std::vector<cplx> a_;
    std::vector<std::size_t> piv_;
};

/// Owns evaluators and buffers for tracking many paths of one homotopy.
class Tracker {
public:
    Tracker(const PolySystem& target, const PolySystem& start, const TrackerConfig& cfg)
        : cfg_(cfg), f_(target), g_(start), n_(target.nvars()), lu_(n_)
    {
    }

    PathResult track(const CVector& root);

private:
    // H and dH/dx at (x, t)
    void eval(const CVector& x, double t)
    {
        h_.setZero(n_);
        hx_.setZero(n_, n_);
        f_.accumulate(x, cplx(t), h_, &hx_);
        g_.accumulate(x, (1.0 - t) * cfg_.gamma, h_, &hx_);
    }

    // dH/dt = f - gamma g
    void eval_dt(const CVector& x)
    {
        ht_.setZero(n_);
        f_.accumulate(x, cplx(1.0), ht_, nullptr);
        g_.accumulate(x, -cfg_.gamma, ht_, nullptr);
    }

    bool correct(CVector& x, double t);

    const TrackerConfig& cfg_;
    SystemEvaluator f_;
    SystemEvaluator g_;
    std::size_t n_;
    DenseLU lu_;
    CVector h_, ht_, dx_;
    CMatrix hx_;
};

bool Tracker::correct(CVector& x, double t)
{
    double prev = 0.0;
    for (unsigned k = 0; k < cfg_.corrector_iters; ++k) {
        eval(x, t);
        if (!lu_.factor(hx_))
            return false;
        lu_.solve(h_, dx_);
        if (!all_finite(dx_))
            return false;
        x -= dx_;
        const double nd = inf_norm(dx_);
        const double scale = 1.0 + inf_norm(x);
        if (k > 0 && nd > 0.5 * prev && nd > cfg_.corrector_tol * scale)
            return false; // not contracting
        if (nd <= cfg_.corrector_tol * scale)
            return true;
        prev = nd;
    }
    return false;
}

PathResult Tracker::track(const CVector& root)
{
    PathResult out;
    CVector x = root;
    double t = 0.0;
    double h = cfg_.initial_step;
    unsigned streak = 0;
    std::size_t steps = 0;

    while (t < 1.0) {
        if (steps >= cfg_.max_steps) {
            out.status = PathStatus::Truncated;
            out.endpoint = x;
            out.steps = steps;
            out.residual = std::numeric_limits<double>::infinity();
            return out;
        }
        ++steps;
        h = std::min(h, 1.0 - t);
        const double t1 = (1.0 - t - h < 1e-14) ? 1.0 : t + h;

        eval(x, t);
        eval_dt(x);
        bool ok = lu_.factor(hx_);
        CVector xp;
        if (ok) {
            lu_.solve(ht_, dx_);
            xp = x - (t1 - t) * dx_; // Euler: dx/dt = -Hx^{-1} Ht
            ok = all_finite(xp) && correct(xp, t1);
        }
        if (ok) {
            x = std::move(xp);
            t = t1;
            if (++streak >= 4) {
                h = std::min(1.5 * h, cfg_.initial_step);
                streak = 0;
            }
            if (inf_norm(x) > cfg_.max_norm) {
                out.status = PathStatus::Diverged;
                out.endpoint = x;
                out.steps = steps;
                out.residual = std::numeric_limits<double>::infinity();
                return out;
            }
        } else {
            streak = 0;
            h *= 0.5;
            if (h < cfg_.min_step) {
                // step underflow: a path running off to infinity or into a
                // singular endpoint
                out.status = inf_norm(x) > std::sqrt(cfg_.max_norm) ? PathStatus::Diverged : PathStatus::Truncated;
                out.endpoint = x;
                out.steps = steps;
                out.residual = std::numeric_limits<double>::infinity();
                return out;
            }
        }
    }

    PathResult refined = newton_with(f_, x, cfg_.endpoint_tol, cfg_.max_newton_iters);
    refined.steps = steps;
    if (refined.status == PathStatus::Converged) {
        // one more polishing step when it still lowers the residual
        PathResult polished = newton_with(f_, refined.endpoint, 0.0, 1);
        if (polished.residual <= refined.residual) {
            refined.endpoint = polished.endpoint;
            refined.residual = polished.residual;
        }
    }
    if (refined.status != PathStatus::Converged && inf_norm(refined.endpoint) > std::sqrt(cfg_.max_norm))
        refined.status = PathStatus::Diverged;
    refined.real = is_numerically_real(refined.endpoint, cfg_.real_tol);
    return refined;
}

} // namespace

PathResult newton_refine(const PolySystem& sys, const CVector& x0, double tol, unsigned max_iters)
{
    if (sys.size() != sys.nvars())
        throw std::invalid_argument("newton_refine needs a square system");
    if (static_cast<std::size_t>(x0.size()) != sys.nvars())
        throw std::invalid_argument("starting point has the wrong length");
    SystemEvaluator eval(sys);
    PathResult r = newton_with(eval, x0, tol, max_iters);
    r.real = is_numerically_real(r.endpoint, 1e-8);
    return r;
}

PathResult track_path(const PolySystem& target, const PolySystem& start, const CVector& root,
                      const TrackerConfig& cfg)
{
    cfg.validate();
    if (target.size() != target.nvars() || start.size() != start.nvars() || start.nvars() != target.nvars())
        throw std::invalid_argument("track_path needs square systems of the same shape");
    if (static_cast<std::size_t>(root.size()) != target.nvars())
        throw std::invalid_argument("start root has the wrong length");
    Tracker tracker(target, start, cfg);
    return tracker.track(root);
}

std::vector<PathResult> deduplicate(std::vector<PathResult> points, double tol)
{
    auto lex_less = [](const PathResult& a, const PathResult& b) {
        for (Eigen::Index i = 0; i < a.endpoint.size(); ++i) {
            const cplx p = a.endpoint(i), q = b.endpoint(i);
            if (p.real() != q.real())
                return p.real() < q.real();
            if (p.imag() != q.imag())
                return p.imag() < q.imag();
        }
        return false;
    };
    std::stable_sort(points.begin(), points.end(), lex_less);
    std::vector<PathResult> kept;
    for (auto& p : points) {
        const double np = inf_norm(p.endpoint);
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const PathResult& k) {
            const double scale = 1.0 + std::max(np, inf_norm(k.endpoint));
            return inf_norm(p.endpoint - k.endpoint) <= tol * scale;
        });
        if (!dup)
            kept.push_back(std::move(p));
    }
    return kept;
}

namespace {

// Each equation divided by its largest coefficient modulus.
PolySystem scale_equations(const PolySystem& sys)
{
    std::vector<Polynomial> polys;
    for (const auto& p : sys) {
        double m = 0.0;
        for (const auto& t : p.terms())
            m = std::max(m, std::abs(t.coeff));
        polys.push_back(m > 0.0 ? cplx(1.0 / m) * p : p);
    }
    return PolySystem(sys.nvars(), std::move(polys));
}

// Several paths ending near the same point: Newton pins a regular root to
// near machine precision, while endpoints at a multiple root only agree to
// about the square root of the tracking tolerance. The relative Jacobian
// test misses the latter for one-variable systems.
void flag_multiple_roots(std::vector<PathResult>& points, double tol)
{
    std::vector<bool> spread(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double scale = 1.0 + std::max(inf_norm(points[i].endpoint), inf_norm(points[j].endpoint));
            const double gap = inf_norm(points[i].endpoint - points[j].endpoint);
            if (gap <= tol * scale && gap > 1e-10 * scale)
                spread[i] = spread[j] = true;
        }
    for (std::size_t i = 0; i < points.size(); ++i)
        points[i].singular = points[i].singular || spread[i];
}

void track_all(const PolySystem& target, const TotalDegreeStart& start, const TrackerConfig& cfg,
               const std::vector<std::size_t>& indices, std::vector<PathResult>& results)
{
    unsigned nthreads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, std::max<std::size_t>(indices.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        Tracker tracker(target, start.system, cfg);
        for (std::size_t k = next++; k < indices.size(); k = next++)
            results[indices[k]] = tracker.track(start.root(indices[k]));
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < nthreads; ++k)
            pool.emplace_back(worker);
    }
}

} // namespace

SolutionSet solve_system(const PolySystem& target, const TrackerConfig& cfg)
{
    cfg.validate();
    const TotalDegreeStart start = total_degree_start(target);
    const PolySystem scaled = scale_equations(target);
    const std::size_t npaths = start.root_count();
    std::vector<PathResult> results(npaths);
    std::vector<std::size_t> all(npaths);
    std::iota(all.begin(), all.end(), std::size_t{0});
    track_all(scaled, start, cfg, all, results);

    // second pass over stalled paths with smaller steps
    std::vector<std::size_t> stalled;
    for (std::size_t i = 0; i < npaths; ++i)
        if (results[i].status == PathStatus::Truncated)
            stalled.push_back(i);
    if (!stalled.empty()) {
        TrackerConfig fine = cfg;
        fine.min_step = cfg.min_step / 100.0;
        fine.initial_step = std::max(cfg.initial_step / 10.0, fine.min_step);
        fine.max_steps = cfg.max_steps * 4;
        fine.corrector_tol = std::min(cfg.corrector_tol, 1e-8);
        std::vector<PathResult> retry(npaths);
        track_all(scaled, start, fine, stalled, retry);
        for (std::size_t i : stalled)
            if (retry[i].status != PathStatus::Truncated)
                results[i] = std::move(retry[i]);
    }

    SystemEvaluator original(target);
    CVector fx;
    for (auto& r : results) {
        if (r.status != PathStatus::Converged)
            continue;
        original.values(r.endpoint, fx);
        r.residual = inf_norm(fx);
    }

    SolutionSet set;
    set.bezout_bound = npaths;
    set.n_paths = npaths;
    std::vector<PathResult> good;
    for (auto& r : results) {
        switch (r.status) {
        case PathStatus::Diverged:
            ++set.n_diverged;
            break;
        case PathStatus::Truncated:
            ++set.n_truncated;
            break;
        case PathStatus::Converged:
            good.push_back(std::move(r));
            break;
        }
    }
    flag_multiple_roots(good, cfg.dedup_tol);
    std::erase_if(good, [&](const PathResult& r) {
        set.n_singular += r.singular ? 1 : 0;
        return r.singular;
    });
    set.solutions = deduplicate(std::move(good), cfg.dedup_tol);
    for (const auto& s : set.solutions)
        set.n_real += s.real ? 1 : 0;
    return set;
}

json solution_set_to_json(const SolutionSet& set)
{
    json sols = json::array();
    for (const auto& s : set.solutions)
        sols.push_back({{"point", vector_to_json(s.endpoint)},
                        {"residual", s.residual},
                        {"singular", s.singular},
                        {"real", s.real}});
    return json{{"bezout", set.bezout_bound},
                {"solutions", std::move(sols)},
                {"n_paths", set.n_paths},
                {"n_diverged", set.n_diverged},
                {"n_truncated", set.n_truncated},
                {"n_singular", set.n_singular},
                {"n_real", set.n_real}};
}

} // namespace acs
