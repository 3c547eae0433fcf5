#ifndef ACS_TESTS_SUPPORT_HPP
#define ACS_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "acs/numeric.hpp"
#include "acs/poly.hpp"

namespace acs::test {

/// Random polynomial with up to `terms` monomials of degree <= max_degree.
inline Polynomial random_polynomial(std::size_t nvars, unsigned max_degree, std::size_t terms, Rng& rng)
{
    std::uniform_int_distribution<unsigned> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, nvars - 1);
    std::normal_distribution<double> normal;
    std::vector<Term> out;
    for (std::size_t k = 0; k < terms; ++k) {
        std::vector<unsigned> e(nvars, 0);
        const unsigned d = deg(rng);
        for (unsigned i = 0; i < d; ++i)
            ++e[var(rng)];
        out.push_back(Term{Monomial(e), cplx(normal(rng), normal(rng))});
    }
    return Polynomial(nvars, std::move(out));
}

inline PolySystem random_system(std::size_t nvars, std::size_t npolys, unsigned max_degree, Rng& rng)
{
    std::vector<Polynomial> polys;
    for (std::size_t i = 0; i < npolys; ++i)
        polys.push_back(random_polynomial(nvars, max_degree, 6, rng));
    return PolySystem(nvars, std::move(polys));
}

/// Univariate polynomial sum_k c[k] x^k.
inline Polynomial univariate(const std::vector<cplx>& c)
{
    std::vector<Term> terms;
    for (std::size_t k = 0; k < c.size(); ++k)
        terms.push_back(Term{Monomial{static_cast<unsigned>(k)}, c[k]});
    return Polynomial(1, std::move(terms));
}

inline cplx horner(const std::vector<cplx>& c, cplx x)
{
    cplx acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;)
        acc = acc * x + c[k];
    return acc;
}

/// Roots of sum_k c[k] x^k from the eigenvalues of its companion matrix.
inline std::vector<cplx> companion_roots(const std::vector<cplx>& c)
{
    const std::size_t n = c.size() - 1;
    CMatrix m = CMatrix::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i)
        m(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        m(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<CMatrix> es(m);
    std::vector<cplx> roots;
    for (std::size_t i = 0; i < n; ++i)
        roots.push_back(es.eigenvalues()(i));
    return roots;
}

/// Central finite-difference Jacobian along the real coordinate directions.
inline CMatrix finite_difference_jacobian(const PolySystem& sys, const CVector& x, double h)
{
    CMatrix j(sys.size(), sys.nvars());
    for (std::size_t v = 0; v < sys.nvars(); ++v) {
        CVector xp = x, xm = x;
        xp(v) += h;
        xm(v) -= h;
        j.col(v) = (evaluate(sys, xp) - evaluate(sys, xm)) / (2.0 * h);
    }
    return j;
}

inline CVector vec(std::initializer_list<cplx> values)
{
    CVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (cplx x : values)
        v(i++) = x;
    return v;
}

} // namespace acs::test

#endif
