#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <doctest.h>

#include "acs/analysis.hpp"
#include "support.hpp"

using namespace acs;
using namespace acs::test;

namespace {

Model rank1()
{
    Model m = build_low_rank_matrix(2, 3, 1);
    dimension(m, 0);
    return m;
}

Model cubic()
{
    Model m = build_twisted_cubic(3);
    dimension(m, 0);
    return m;
}

Model circle(const CVector& witness)
{
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    Model m = Model::from_equations(PolySystem(2, {x * x + y * y - Polynomial::constant(2, 1.0)}), witness);
    dimension(m, 0);
    return m;
}

std::vector<std::size_t> zero_based(std::initializer_list<std::size_t> one_based)
{
    std::vector<std::size_t> out;
    for (auto i : one_based)
        out.push_back(i - 1);
    return out;
}

} // namespace

TEST_SUITE("analysis")
{
    TEST_CASE("recoverability of the rank-one projections")
    {
        const Model m = rank1();
        const auto no = is_generically_recoverable(m, coordinate_projection(6, zero_based({1, 2, 4, 5})), 1);
        CHECK(no.verdict == Verdict::No);
        CHECK(no.witnessed_rank == 3);
        CHECK(no.ranks_tried.size() == 10);
        const auto yes = is_generically_recoverable(m, coordinate_projection(6, zero_based({1, 2, 3, 4})), 1);
        CHECK(yes.verdict == Verdict::Yes);
        CHECK(yes.witnessed_rank == 4);
        CHECK(yes.singular_values.size() == 4);
        CHECK(is_generically_recoverable(m, MeasurementMap::linear(CMatrix::Identity(6, 6)), 1).verdict ==
              Verdict::Yes);
        CHECK_THROWS_AS(is_generically_recoverable(m, coordinate_projection(5, {0}), 1), std::invalid_argument);
    }

    TEST_CASE("recoverability is monotone under adding coordinates")
    {
        const Model m = rank1();
        std::vector<std::vector<std::size_t>> passing;
        for (unsigned mask = 0; mask < 64; ++mask) {
            if (__builtin_popcount(mask) != 4)
                continue;
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < 6; ++i)
                if (mask & (1u << i))
                    idx.push_back(i);
            if (is_generically_recoverable(m, coordinate_projection(6, idx), mask).verdict == Verdict::Yes)
                passing.push_back(idx);
        }
        CHECK_FALSE(passing.empty());
        for (const auto& base : passing) {
            for (std::size_t extra = 0; extra < 6; ++extra) {
                if (std::find(base.begin(), base.end(), extra) != base.end())
                    continue;
                auto idx = base;
                idx.push_back(extra);
                CHECK(is_generically_recoverable(m, coordinate_projection(6, idx), extra).verdict == Verdict::Yes);
            }
        }
    }

    TEST_CASE("implicit recoverability uses the witness")
    {
        const Model good = circle(vec({0.6, 0.8}));
        CHECK(is_generically_recoverable(good, coordinate_projection(2, {0}), 0).verdict == Verdict::Yes);

        // nodal cubic y^2 = x^2 (x + 1), witness at the node
        const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
        Model node = Model::from_equations(PolySystem(2, {y * y - x * x * (x + Polynomial::constant(2, 1.0))}),
                                           vec({0.0, 0.0}));
        node.set_dimension(1);
        CHECK(is_generically_recoverable(node, coordinate_projection(2, {0}), 0).verdict == Verdict::Inconclusive);

        Model blind = Model::from_equations(PolySystem(2, {x * x + y * y - Polynomial::constant(2, 1.0)}),
                                            std::nullopt);
        blind.set_dimension(1);
        CHECK_THROWS_AS(is_generically_recoverable(blind, coordinate_projection(2, {0}), 0), std::invalid_argument);
    }

    TEST_CASE("coordinate selection")
    {
        const auto one = select_recoverable_coordinates(cubic(), 3);
        CHECK(one.size() == 1);
        const Model m = rank1();
        const auto four = select_recoverable_coordinates(m, 3);
        REQUIRE(four.size() == 4);
        CHECK(is_generically_recoverable(m, coordinate_projection(6, four), 99).verdict == Verdict::Yes);

        CMatrix a(4, 2);
        a << 1, 0, 2, 0, 0, 1, 0, 0;
        Model lin = build_linear(a);
        dimension(lin, 0);
        const auto sel = select_recoverable_coordinates(lin, 1);
        REQUIRE(sel.size() == 2);
        CHECK(std::find(sel.begin(), sel.end(), 2) != sel.end());
    }

    TEST_CASE("condition numbers at the rank-one point (1,2,1,1,1)")
    {
        const Model m = rank1();
        const CVector t = vec({1, 2, 1, 1, 1});
        const auto good = condition_number(m, coordinate_projection(6, zero_based({1, 2, 3, 4})), t);
        CHECK(good.kappa == doctest::Approx(3.8730).epsilon(1e-3));
        const auto bad = condition_number(m, coordinate_projection(6, zero_based({1, 2, 4, 5})), t);
        CHECK(bad.kappa >= 1e15);
        CHECK(bad.singular_values(0) == doctest::Approx(1.0).epsilon(0.01));
        CHECK(bad.singular_values(1) == doctest::Approx(1.0).epsilon(0.01));
        CHECK(bad.singular_values(2) == doctest::Approx(0.82).epsilon(0.01));
    }

    TEST_CASE("projection onto a coordinate subspace model is an isometry")
    {
        CMatrix a = CMatrix::Zero(4, 2);
        a(1, 0) = 1.0;
        a(3, 1) = 1.0;
        Model lin = build_linear(a);
        dimension(lin, 0);
        const auto c = condition_number(lin, coordinate_projection(4, {1, 3}), vec({0.3, -2.0}));
        CHECK(c.kappa == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("kappa does not depend on the choice of tangent basis")
    {
        Rng rng(5);
        const Model m = rank1();
        const MeasurementMap map = sample_generic_linear(6, 4, Field::Real, 2);
        for (int trial = 0; trial < 5; ++trial) {
            const CVector t = sample_parameter(m, rng);
            const TangentFrame f = tangent_frame(m, t);
            const Eigen::HouseholderQR<CMatrix> qr(sample_gaussian_matrix(4, 4, Field::Complex, rng));
            const CMatrix u = qr.householderQ();
            const double k1 = condition_number(m, map, t).kappa;
            const double k2 = condition_number_from_frame(map.matrix(), f.basis * u).kappa;
            CHECK(std::abs(k1 - k2) <= 1e-10 * k1);
        }
    }

    TEST_CASE("fiber of the twisted cubic over its first coordinate")
    {
        const FiberResult fr = fiber_solve(cubic(), coordinate_projection(3, {0}), vec({2.0}),
                                           TrackerConfig::with_seed(1));
        REQUIRE(fr.ambient.size() == 1);
        CHECK((fr.ambient[0].point - vec({2, 4, 8})).norm() < 1e-10);
        CHECK(fr.ambient[0].real);
    }

    TEST_CASE("fiber of the circle over x = 1/2")
    {
        const FiberResult fr = fiber_solve(circle(vec({0.6, 0.8})), coordinate_projection(2, {0}), vec({0.5}),
                                           TrackerConfig::with_seed(1));
        REQUIRE(fr.ambient.size() == 2);
        for (const auto& a : fr.ambient) {
            CHECK(std::abs(a.point(0) - 0.5) < 1e-12);
            CHECK(std::abs(std::abs(a.point(1)) - std::sqrt(0.75)) < 1e-12);
        }
    }

    TEST_CASE("too few measurements give a positive-dimensional fiber")
    {
        const Model m = rank1();
        const MeasurementMap map = sample_generic_linear(6, 3, Field::Real, 1);
        CHECK_THROWS_AS(fiber_solve(m, map, vec({1, 2, 3}), TrackerConfig::with_seed(1)), PositiveDimensionalFiber);
        const MeasurementMap bad = coordinate_projection(6, zero_based({1, 2, 4, 5}));
        CHECK_THROWS_AS(fiber_solve(m, bad, vec({1, 2, 3, 4}), TrackerConfig::with_seed(1)),
                        PositiveDimensionalFiber);
    }

    TEST_CASE("overdetermined fibers are squared and filtered")
    {
        Rng rng(6);
        const Model m = rank1();
        const CVector t = sample_parameter(m, rng);
        const MeasurementMap map = sample_generic_linear(6, 5, Field::Real, 4);
        const FiberResult fr = fiber_solve(m, map, map.apply(m.ambient_point(t)), TrackerConfig::with_seed(2));
        CHECK(fr.square_size == 5);
        CHECK(fr.slice_count == 1);
        REQUIRE(fr.ambient.size() == 1);
        CHECK(inf_norm(fr.ambient[0].point - m.ambient_point(t)) < 1e-8);
    }

    TEST_CASE("fiber cardinality of the twisted cubic")
    {
        const auto s1 = fiber_cardinality_experiment(cubic(), 1, 5, 3);
        CHECK(s1.constant_size());
        for (const auto& t : s1.trials) {
            CHECK(t.complex_size == 3);
            CHECK(t.planted_recovered);
            CHECK(t.real_size >= 1);
        }
        const auto s2 = fiber_cardinality_experiment(cubic(), 2, 5, 3);
        for (const auto& t : s2.trials) {
            CHECK(t.complex_size == 1);
            CHECK(t.planted_recovered);
        }
    }

    TEST_CASE("degrees of small models")
    {
        const TrackerConfig cfg = TrackerConfig::with_seed(1);
        CMatrix a(3, 2);
        a << 1, 2, 0, 1, 3, -1;
        Model lin = build_linear(a);
        dimension(lin, 0);
        CHECK(degree(lin, cfg, 1) == 1);
        CHECK(degree(cubic(), cfg, 1) == 3);
        Model rank1_2x2 = build_low_rank_matrix(2, 2, 1);
        dimension(rank1_2x2, 0);
        CHECK(degree(rank1_2x2, cfg, 1) == 2);
        Model lifted = veronese_lift(rank1_2x2, 2);
        dimension(lifted, 0);
        CHECK(degree(lifted, cfg, 1) == 16);
    }

    TEST_CASE("identifiability bounds")
    {
        const auto c = everywhere_identifiability_bound(cubic(), 1);
        CHECK(c.s_min == 3);
        CHECK(c.difference_dim == 2);
        CHECK(c.universal_bound == 3);
        CHECK(c.notes.empty());

        CMatrix a(4, 2);
        a << 1, 0, 0, 1, 1, 1, 2, -1;
        Model lin = build_linear(a);
        dimension(lin, 0);
        const auto l = everywhere_identifiability_bound(lin, 1);
        CHECK(l.s_min == 3);
        REQUIRE(l.notes.size() == 1);

        const auto r = everywhere_identifiability_bound(rank1(), 1);
        CHECK(r.difference_dim == 6);
        CHECK(r.s_min == 7);
        CHECK(r.universal_bound == 9);
    }

    TEST_CASE("symmetry quotient")
    {
        Model m = build_cp_tensor({4, 3, 2}, 2, true);
        dimension(m, 0);
        Rng rng(2);
        const CVector t = sample_parameter(m, rng);
        const CVector swapped = m.symmetry().generators[0].apply(t);
        CHECK(quotient_by_symmetry({}, m.symmetry(), m).empty());
        CHECK(quotient_by_symmetry({t, t}, m.symmetry(), m).size() == 1);
        CHECK(quotient_by_symmetry({t, swapped}, m.symmetry(), m).size() == 1);
        CHECK(quotient_by_symmetry({t, sample_parameter(m, rng)}, m.symmetry(), m).size() == 2);

        SymmetryGroup wrong;
        SymmetryGenerator g;
        g.perm.resize(14);
        std::iota(g.perm.begin(), g.perm.end(), 0);
        std::swap(g.perm[0], g.perm[1]);
        wrong.generators.push_back(g);
        CHECK_THROWS_AS(quotient_by_symmetry({t}, wrong, m), std::invalid_argument);
    }

    TEST_CASE("report JSON carries the evidence")
    {
        WellPosednessReport r;
        r.model_dim = 4;
        r.n_measurements = 4;
        r.seed = 7;
        r.recoverable = is_generically_recoverable(rank1(), coordinate_projection(6, {0, 1, 2, 3}), 7);
        r.condition = ConditionResult{std::numeric_limits<double>::infinity(), Eigen::VectorXd::Ones(2)};
        r.notes.push_back("note");
        const json j = report_to_json(r);
        CHECK(j.at("recoverable").at("verdict") == "yes");
        CHECK(j.at("recoverable").at("witnessed_rank") == 4);
        CHECK(j.at("recoverable").at("singular_values").size() == 4);
        CHECK(j.at("condition").at("kappa").is_null());
        CHECK(j.at("identifiability").at("verdict") == "inconclusive");
        CHECK(j.at("degree").is_null());
    }
}
