#include <doctest.h>

#include "acs/experiments.hpp"
#include "acs/model.hpp"
#include "support.hpp"

using namespace acs;
using namespace acs::test;

namespace {

Model circle(std::optional<CVector> witness)
{
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    return Model::from_equations(PolySystem(2, {x * x + y * y - Polynomial::constant(2, 1.0)}), witness);
}

} // namespace

TEST_SUITE("model")
{
    TEST_CASE("dimensions of the desk models match closed forms")
    {
        Model cubic = build_twisted_cubic(3);
        CHECK(dimension(cubic, 1) == 1);
        Model rank1 = build_low_rank_matrix(2, 3, 1);
        CHECK(dimension(rank1, 1) == 4);
        Model rank2 = build_low_rank_matrix(3, 4, 2);
        CHECK(dimension(rank2, 1) == 2 * (3 + 4 - 2));
        Model tensor = build_cp_tensor({4, 3, 2}, 2, true);
        CHECK(dimension(tensor, 1) == 14);
        Model unnormalized = build_cp_tensor({4, 3, 2}, 2, false);
        CHECK(dimension(unnormalized, 1) == 14);
        Model c = circle(test::vec({0.6, 0.8}));
        CHECK(dimension(c, 1) == 1);
        CMatrix a(3, 2);
        a << 1, 0, 0, 1, 1, 1;
        Model lin = build_linear(a);
        CHECK(dimension(lin, 1) == 2);
    }

    TEST_CASE("dimension must be computed before it is used")
    {
        Model m = build_twisted_cubic(3);
        CHECK_THROWS_AS(m.dim(), std::logic_error);
        CHECK_THROWS_AS(m.set_dimension(4), std::invalid_argument);
        CHECK_THROWS_AS(m.equations(), std::invalid_argument);
        Model nowitness = circle(std::nullopt);
        CHECK_THROWS_AS(dimension(nowitness, 0), std::invalid_argument);
    }

    TEST_CASE("witness points must lie on the variety")
    {
        CHECK_THROWS_AS(circle(test::vec({1.0, 1.0})), std::invalid_argument);
        CHECK_NOTHROW(circle(test::vec({1.0, 0.0})));
    }

    TEST_CASE("tangent frame of the twisted cubic spans the curve's velocity")
    {
        Model m = build_twisted_cubic(3);
        dimension(m, 0);
        const double t = 0.7;
        const TangentFrame f = tangent_frame(m, test::vec({t}));
        REQUIRE(f.basis.cols() == 1);
        CVector v = test::vec({1.0, 2 * t, 3 * t * t});
        v /= v.norm();
        CHECK(std::abs(std::abs(f.basis.col(0).dot(v)) - 1.0) < 1e-12);
        CHECK((f.base_point - test::vec({t, t * t, t * t * t})).norm() < 1e-15);
    }

    TEST_CASE("implicit tangent frame is the kernel of the equations' Jacobian")
    {
        Model c = circle(test::vec({0.6, 0.8}));
        dimension(c, 0);
        const TangentFrame f = tangent_frame(c, test::vec({0.6, 0.8}));
        REQUIRE(f.basis.cols() == 1);
        CHECK(std::abs(f.basis(0, 0) * 0.6 + f.basis(1, 0) * 0.8) < 1e-12);
    }

    TEST_CASE("rank drop at a parameter is reported as a singular point")
    {
        Model m = build_low_rank_matrix(2, 3, 1);
        dimension(m, 0);
        CHECK_THROWS_AS(tangent_frame(m, CVector::Zero(5)), SingularPoint);
    }

    TEST_CASE("attached symmetries leave the parameterization invariant")
    {
        Rng rng(4);
        for (Model m : {build_low_rank_matrix(3, 2, 2), build_cp_tensor({4, 3, 2}, 2, true),
                        build_cp_tensor({2, 2, 2}, 3, false)}) {
            REQUIRE_FALSE(m.symmetry().empty());
            for (const auto& g : m.symmetry().generators) {
                const CVector t = sample_gaussian_vector(m.parameter_count(), Field::Complex, rng);
                const CVector x = m.ambient_point(t);
                CHECK((m.ambient_point(g.apply(t)) - x).norm() <= 1e-12 * (1.0 + x.norm()));
            }
        }
    }

    TEST_CASE("tensor layout and the fixture decomposition")
    {
        CHECK(tensor_index({4, 3, 2}, {0, 0, 0}) == 0);
        CHECK(tensor_index({4, 3, 2}, {0, 1, 0}) == 1);
        CHECK(tensor_index({4, 3, 2}, {1, 0, 0}) == 3);
        CHECK(tensor_index({4, 3, 2}, {0, 0, 1}) == 12);
        CHECK(tensor_index({4, 3, 2}, {3, 2, 1}) == 23);
        CHECK(tensor_index({2, 2, 2, 3}, {1, 1, 1, 2}) == (1 + 2 * 2) * 4 + 3);
        CHECK_THROWS_AS(tensor_index({4, 3, 2}, {4, 0, 0}), std::invalid_argument);

        const Tensor432Fixture fx = tensor432_fixture();
        const Model m = build_cp_tensor(fx.dims, 2, true);
        const CVector t1 = m.ambient_point(fx.planted_parameter);
        CHECK((t1 - fx.displayed_t1).norm() < 1e-12);
        for (std::size_t k = 0; k < fx.observed.size(); ++k)
            CHECK(t1(fx.observed[k]) == fx.values(k));
        CHECK(t1(fx.shared_index) == cplx(-26.0));
    }

    TEST_CASE("low-rank matrices are row-major products")
    {
        const Model m = build_low_rank_matrix(2, 3, 1);
        const CVector x = m.ambient_point(test::vec({1, 2, 3, 4, 5}));
        CHECK((x - test::vec({3, 4, 5, 6, 8, 10})).norm() == 0.0);
    }

    TEST_CASE("veronese lift and difference model")
    {
        const Model cubic = build_twisted_cubic(3);
        const Model lifted = veronese_lift(cubic, 2);
        CHECK(lifted.ambient_dim() == 10);
        const CVector x = lifted.ambient_point(test::vec({2.0}));
        CHECK(x(0) == cplx(1.0));
        CHECK(x(1) == cplx(2.0));
        CHECK(x(4) == cplx(4.0));  // x1^2
        CHECK(x(9) == cplx(64.0)); // x3^2

        Model diff = difference_model(cubic);
        CHECK(diff.parameter_count() == 2);
        CHECK(diff.ambient_point(test::vec({2.0, 1.0}))(2) == cplx(7.0));
        CHECK(dimension(diff, 3) == 2);
    }

    TEST_CASE("model JSON round-trips with 1-based symmetry permutations")
    {
        Model m = build_cp_tensor({4, 3, 2}, 2, true);
        dimension(m, 0);
        const json j = model_to_json(m);
        CHECK(j.at("symmetry")[0].at("perm")[0] == 4);
        const Model back = model_from_json(json::parse(j.dump()));
        CHECK(back.parameterization() == m.parameterization());
        CHECK(back.dim() == 14);
        CHECK(back.symmetry().generators[0].perm == m.symmetry().generators[0].perm);

        const Model c = circle(test::vec({0.6, 0.8}));
        const Model cb = model_from_json(model_to_json(c));
        CHECK_FALSE(cb.is_explicit());
        CHECK(*cb.witness() == *c.witness());

        json bad = model_to_json(build_twisted_cubic(3));
        bad["form"] = "weird";
        CHECK_THROWS_AS(model_from_json(bad), std::invalid_argument);
        bad["form"] = "explicit";
        bad["ambient_dim"] = 4;
        CHECK_THROWS_AS(model_from_json(bad), std::invalid_argument);
    }
}
