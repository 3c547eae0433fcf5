#include <set>

#include <doctest.h>

#include "acs/numeric.hpp"
#include "support.hpp"

using namespace acs;
using namespace acs::test;

TEST_SUITE("numeric")
{
    TEST_CASE("derived seeds are deterministic and distinct")
    {
        CHECK(derive_seed(42, 3) == derive_seed(42, 3));
        std::set<std::uint64_t> seen;
        for (std::uint64_t i = 0; i < 1000; ++i)
            seen.insert(derive_seed(42, i));
        CHECK(seen.size() == 1000);
        CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    }

    TEST_CASE("gaussian samples are reproducible and real when asked")
    {
        Rng a(9), b(9);
        const CMatrix x = sample_gaussian_matrix(3, 4, Field::Complex, a);
        const CMatrix y = sample_gaussian_matrix(3, 4, Field::Complex, b);
        CHECK(x == y);
        Rng c(9);
        const CVector r = sample_gaussian_vector(100, Field::Real, c);
        CHECK(r.imag().norm() == 0.0);
    }

    TEST_CASE("numerical rank uses the relative singular value threshold")
    {
        CMatrix a = CMatrix::Zero(3, 3);
        a(0, 0) = 1.0;
        a(1, 1) = 1e-7;
        a(2, 2) = 1e-9;
        const RankInfo info = numerical_rank(a);
        CHECK(info.rank == 2);
        CHECK(info.singular_values(0) == doctest::Approx(1.0));

        CHECK(numerical_rank(CMatrix::Zero(2, 2)).rank == 0);
        CHECK(numerical_rank(1e-15 * CMatrix::Identity(2, 2)).rank == 0);
        CHECK(numerical_rank(1e-13 * CMatrix::Identity(2, 2)).rank == 2);

        Rng rng(1);
        const CMatrix u = sample_gaussian_matrix(6, 2, Field::Complex, rng);
        const CMatrix v = sample_gaussian_matrix(2, 5, Field::Complex, rng);
        CHECK(numerical_rank(u * v).rank == 2);
    }

    TEST_CASE("column space and kernel bases are orthonormal and complementary")
    {
        Rng rng(2);
        const CMatrix a = sample_gaussian_matrix(5, 3, Field::Complex, rng) *
                          sample_gaussian_matrix(3, 6, Field::Complex, rng);
        const std::size_t r = numerical_rank(a).rank;
        REQUIRE(r == 3);
        const CMatrix q = column_space_basis(a, r);
        CHECK((q.adjoint() * q - CMatrix::Identity(3, 3)).norm() < 1e-12);
        CHECK((a - q * q.adjoint() * a).norm() < 1e-10 * a.norm());
        const CMatrix k = kernel_basis(a, r);
        REQUIRE(k.cols() == 3);
        CHECK((k.adjoint() * k - CMatrix::Identity(3, 3)).norm() < 1e-12);
        CHECK((a * k).norm() < 1e-10 * a.norm());
    }

    TEST_CASE("reality test is relative to the real part")
    {
        CHECK(is_numerically_real(vec({cplx(1e6, 1e-3)}), 1e-8));
        CHECK_FALSE(is_numerically_real(vec({cplx(1.0, 1e-6)}), 1e-8));
        CHECK(inf_norm(vec({cplx(3.0, 4.0), 1.0})) == doctest::Approx(5.0));
        CHECK(inf_norm(CVector()) == 0.0);
    }

    TEST_CASE("field names round-trip")
    {
        CHECK(field_from_string(to_string(Field::Real)) == Field::Real);
        CHECK(field_from_string(to_string(Field::Complex)) == Field::Complex);
        CHECK_THROWS_AS(field_from_string("quaternion"), std::invalid_argument);
    }
}
