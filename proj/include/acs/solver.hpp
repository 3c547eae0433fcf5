#ifndef ACS_SOLVER_HPP
#define ACS_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "acs/json_io.hpp"
#include "acs/numeric.hpp"
#include "acs/poly.hpp"

namespace acs {

/// Unit-modulus constant for the gamma trick; its argument stays at least
/// 1e-3 away from multiples of pi/2.
cplx random_gamma(std::uint64_t seed);

struct TrackerConfig {
    double initial_step = 0.1;
    double min_step = 1e-7;
    double newton_tol = 1e-10;
    unsigned max_newton_iters = 5;
    unsigned max_steps = 10000;
    cplx gamma = random_gamma(0);
    double endpoint_tol = 1e-12;
    double dedup_tol = 1e-6;
    double real_tol = 1e-8;

    // Path tracking internals.
    unsigned corrector_iters = 3;
    double corrector_tol = 1e-6;
    /// A path whose sup-norm exceeds this is reported as diverged.
    double max_norm = 1e8;
    /// 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Seeds gamma and any randomization done on top of the tracker.
    std::uint64_t seed = 0;

    static TrackerConfig with_seed(std::uint64_t seed);
    /// Throws std::invalid_argument when the invariants do not hold.
    void validate() const;
};

enum class PathStatus { Converged, Diverged, Truncated };

std::string to_string(PathStatus s);

struct PathResult {
    CVector endpoint;
    PathStatus status = PathStatus::Truncated;
    double residual = 0.0;
    bool singular = false;
    bool real = false;
    std::size_t steps = 0;
};

struct SolutionSet {
    /// Converged, nonsingular, deduplicated endpoints in canonical order.
    std::vector<PathResult> solutions;
    std::size_t bezout_bound = 0;
    std::size_t n_real = 0;
    std::size_t n_paths = 0;
    std::size_t n_diverged = 0;
    std::size_t n_truncated = 0;
    /// Converged endpoints dropped because their Jacobian is singular.
    std::size_t n_singular = 0;
};

/// g_i = x_i^{d_i} - 1 together with its prod d_i roots.
struct TotalDegreeStart {
    PolySystem system;
    std::vector<unsigned> degrees;

    std::size_t root_count() const;
    /// Mixed-radix enumeration, the first variable varying slowest.
    CVector root(std::size_t index) const;
    std::vector<CVector> roots() const;
};

/// Throws std::invalid_argument for non-square targets or constant equations.
TotalDegreeStart total_degree_start(const PolySystem& target);

/// Tracks H(x,t) = (1-t) gamma start + t target from t = 0 to 1 with an
/// Euler predictor and Newton corrector, then refines at t = 1.
PathResult track_path(const PolySystem& target, const PolySystem& start, const CVector& root,
                      const TrackerConfig& cfg);

/// Damped Newton iteration; converged iff |sys(x)|_inf <= tol (1 + |x|_inf).
PathResult newton_refine(const PolySystem& sys, const CVector& x0, double tol, unsigned max_iters);

/// Ratio test sigma_min / sigma_max <= 1e-8 on the Jacobian.
bool is_singular_jacobian(const CMatrix& jac);

SolutionSet solve_system(const PolySystem& target, const TrackerConfig& cfg);

/// Sorts by (Re, Im) lexicographically, then keeps points farther than
/// tol (1 + max norm) from all kept points.
std::vector<PathResult> deduplicate(std::vector<PathResult> points, double tol);

json solution_set_to_json(const SolutionSet& set);

} // namespace acs

#endif
