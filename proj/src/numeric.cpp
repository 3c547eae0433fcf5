#include "acs/numeric.hpp"

#include <cmath>

namespace acs {

std::string to_string(Field f)
{
    return f == Field::Real ? "real" : "complex";
}

Field field_from_string(const std::string& s)
{
    if (s == "real")
        return Field::Real;
    if (s == "complex")
        return Field::Complex;
    throw std::invalid_argument("unknown field '" + s + "' (expected real|complex)");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

CVector sample_gaussian_vector(std::size_t n, Field field, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (field == Field::Real) {
            v(i) = normal(rng);
        } else {
            const double re = normal(rng);
            const double im = normal(rng);
            v(i) = cplx(re, im) / std::sqrt(2.0);
        }
    }
    return v;
}

CMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, Field field, Rng& rng)
{
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        CVector row = sample_gaussian_vector(cols, field, rng);
        m.row(i) = row.transpose();
    }
    return m;
}

RankInfo numerical_rank(const CMatrix& a)
{
    RankInfo info;
    if (a.size() == 0) {
        info.singular_values.resize(0);
        return info;
    }
    Eigen::JacobiSVD<CMatrix> svd(a);
    info.singular_values = svd.singularValues();
    const double s1 = info.singular_values(0);
    if (!(s1 > kRankAbsTol))
        return info;
    for (Eigen::Index i = 0; i < info.singular_values.size(); ++i)
        if (info.singular_values(i) > kRankRelTol * s1)
            ++info.rank;
    return info;
}

CMatrix column_space_basis(const CMatrix& a, std::size_t rank)
{
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
    return svd.matrixU().leftCols(rank);
}

CMatrix kernel_basis(const CMatrix& a, std::size_t rank)
{
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(a.cols() - rank);
}

bool is_numerically_real(const CVector& v, double tol)
{
    if (v.size() == 0)
        return true;
    const double im = v.imag().cwiseAbs().maxCoeff();
    const double re = v.real().cwiseAbs().maxCoeff();
    return im <= tol * (1.0 + re);
}

} // namespace acs
