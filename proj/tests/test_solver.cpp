#include <algorithm>
#include <numbers>

#include <doctest.h>

#include "acs/solver.hpp"
#include "support.hpp"

using namespace acs;
using namespace acs::test;

namespace {

PolySystem circle_and_hyperbola()
{
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    return PolySystem(2, {x * x + y * y - Polynomial::constant(2, 5.0), x * y - Polynomial::constant(2, 2.0)});
}

} // namespace

TEST_SUITE("solver")
{
    TEST_CASE("gamma has unit modulus and stays off the axes")
    {
        for (std::uint64_t s = 0; s < 200; ++s) {
            const cplx g = random_gamma(s);
            CHECK(std::abs(std::abs(g) - 1.0) < 1e-15);
            const double r = std::fmod(std::arg(g) + 2 * std::numbers::pi, std::numbers::pi / 2);
            CHECK(r > 1e-3);
            CHECK(std::numbers::pi / 2 - r > 1e-3);
        }
        CHECK(random_gamma(5) == random_gamma(5));
    }

    TEST_CASE("configuration invariants are validated")
    {
        TrackerConfig cfg;
        CHECK_NOTHROW(cfg.validate());
        cfg.min_step = 0.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = TrackerConfig{};
        cfg.gamma = 2.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg = TrackerConfig{};
        cfg.endpoint_tol = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }

    TEST_CASE("total degree start system and its roots")
    {
        const TotalDegreeStart st = total_degree_start(circle_and_hyperbola());
        CHECK(st.degrees == std::vector<unsigned>{2, 2});
        CHECK(st.root_count() == 4);
        for (const auto& r : st.roots())
            CHECK(inf_norm(evaluate(st.system, r)) < 1e-14);
        CHECK(st.root(1)(0) == st.root(0)(0));
        CHECK(st.root(2)(0) != st.root(0)(0));

        const Polynomial x = Polynomial::variable(2, 0);
        CHECK_THROWS_AS(total_degree_start(PolySystem(2, {x})), std::invalid_argument);
        CHECK_THROWS_AS(total_degree_start(PolySystem(2, {x, Polynomial::constant(2, 1.0)})),
                        std::invalid_argument);
    }

    TEST_CASE("all four intersections of a circle and a hyperbola")
    {
        const SolutionSet set = solve_system(circle_and_hyperbola(), TrackerConfig::with_seed(3));
        CHECK(set.bezout_bound == 4);
        REQUIRE(set.solutions.size() == 4);
        CHECK(set.n_real == 4);
        const std::vector<std::pair<double, double>> expect{{-2, -1}, {-1, -2}, {1, 2}, {2, 1}};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(set.solutions[i].endpoint(0).real() == doctest::Approx(expect[i].first).epsilon(1e-12));
            CHECK(set.solutions[i].endpoint(1).real() == doctest::Approx(expect[i].second).epsilon(1e-12));
            CHECK(set.solutions[i].residual <= 1e-10);
        }
    }

    TEST_CASE("univariate roots agree with companion matrix eigenvalues")
    {
        Rng rng(21);
        std::normal_distribution<double> n;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cplx> c(2 + trial % 7);
            for (auto& x : c)
                x = cplx(n(rng), n(rng));
            const SolutionSet set = solve_system(PolySystem(1, {univariate(c)}), TrackerConfig::with_seed(trial));
            const auto roots = companion_roots(c);
            REQUIRE(set.solutions.size() == roots.size());
            for (const auto& r : roots) {
                double best = 1e300;
                for (const auto& s : set.solutions)
                    best = std::min(best, std::abs(s.endpoint(0) - r));
                CHECK(best <= 1e-6 * (1.0 + std::abs(r)));
            }
        }
    }

    TEST_CASE("solutions at infinity are reported as diverged paths")
    {
        // x*y = 1, x = 2 has one finite solution, Bezout bound 2
        const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
        const PolySystem sys(2, {x * y - Polynomial::constant(2, 1.0), x - Polynomial::constant(2, 2.0)});
        const SolutionSet set = solve_system(sys, TrackerConfig::with_seed(1));
        REQUIRE(set.solutions.size() == 1);
        CHECK(std::abs(set.solutions[0].endpoint(1) - 0.5) < 1e-12);
        CHECK(set.n_paths == 2);
        CHECK(set.n_diverged + set.n_truncated == 1);
    }

    TEST_CASE("double roots are flagged singular and left out of the solution set")
    {
        // (x - 1)^2 (x + 2)
        const SolutionSet set = solve_system(PolySystem(1, {univariate({2.0, -3.0, 0.0, 1.0})}),
                                             TrackerConfig::with_seed(4));
        REQUIRE(set.solutions.size() == 1);
        CHECK(std::abs(set.solutions[0].endpoint(0) + 2.0) < 1e-10);
        CHECK(set.n_singular + set.n_truncated == 2);
    }

    TEST_CASE("Newton from far away either converges or says it did not")
    {
        const PolySystem sys(1, {univariate({-2.0, 0.0, 1.0})});
        const PathResult r = newton_refine(sys, vec({1e6}), 1e-12, 5);
        if (r.status == PathStatus::Converged)
            CHECK(std::abs(std::abs(r.endpoint(0)) - std::sqrt(2.0)) < 1e-10);
        else
            CHECK(r.status == PathStatus::Truncated);
        const PathResult r2 = newton_refine(sys, vec({1e6}), 1e-12, 60);
        CHECK(r2.status == PathStatus::Converged);
        CHECK(std::abs(r2.endpoint(0) - std::sqrt(2.0)) < 1e-12);
        CHECK_THROWS_AS(newton_refine(circle_and_hyperbola(), vec({1.0}), 1e-12, 5), std::invalid_argument);
    }

    TEST_CASE("a single path from a start root reaches a target root")
    {
        const PolySystem target = circle_and_hyperbola();
        const TotalDegreeStart st = total_degree_start(target);
        const PathResult r = track_path(target, st.system, st.root(0), TrackerConfig::with_seed(2));
        REQUIRE(r.status == PathStatus::Converged);
        CHECK(inf_norm(evaluate(target, r.endpoint)) < 1e-10);
        CHECK(r.steps > 0);
    }

    TEST_CASE("deduplication sorts lexicographically and merges near points")
    {
        auto pr = [](cplx a) {
            PathResult p;
            p.endpoint = vec({a});
            return p;
        };
        const auto kept = deduplicate({pr({2.0, 0.0}), pr({1.0, 1.0}), pr({1.0, -1.0}), pr({2.0 + 1e-9, 0.0})}, 1e-6);
        REQUIRE(kept.size() == 3);
        CHECK(kept[0].endpoint(0) == cplx(1.0, -1.0));
        CHECK(kept[1].endpoint(0) == cplx(1.0, 1.0));
        CHECK(kept[2].endpoint(0) == cplx(2.0, 0.0));
    }

    TEST_CASE("fixed seeds give bit-identical results for any thread count")
    {
        Rng rng(12);
        const PolySystem sys = random_system(2, 2, 3, rng);
        TrackerConfig one = TrackerConfig::with_seed(9);
        one.threads = 1;
        TrackerConfig three = one;
        three.threads = 3;
        const SolutionSet a = solve_system(sys, one);
        const SolutionSet b = solve_system(sys, three);
        CHECK(solution_set_to_json(a).dump() == solution_set_to_json(b).dump());
        CHECK(solution_set_to_json(a).dump() == solution_set_to_json(solve_system(sys, one)).dump());
    }
}
