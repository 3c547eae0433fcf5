#ifndef ACS_NUMERIC_HPP
#define ACS_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "acs/poly.hpp"

namespace acs {

/// Base class for failures of a numerical procedure, as opposed to
/// malformed input (std::invalid_argument).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Field { Real, Complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

using Rng = std::mt19937_64;

/// Deterministic child seed for stream `index` of a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// i.i.d. standard Gaussian entries; complex field uses (N + iN)/sqrt(2).
CVector sample_gaussian_vector(std::size_t n, Field field, Rng& rng);
CMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols, Field field, Rng& rng);

/// Relative threshold on singular values: sigma_i counts iff
/// sigma_i > kRankRelTol * sigma_1 and sigma_1 > kRankAbsTol.
inline constexpr double kRankRelTol = 1e-8;
inline constexpr double kRankAbsTol = 1e-14;

struct RankInfo {
    std::size_t rank = 0;
    Eigen::VectorXd singular_values;
};

RankInfo numerical_rank(const CMatrix& a);

/// Columns: orthonormal basis of the numerical column space (left singular
/// vectors for the `rank` largest singular values).
CMatrix column_space_basis(const CMatrix& a, std::size_t rank);

/// Columns: orthonormal basis of the numerical kernel, dimension cols - rank.
CMatrix kernel_basis(const CMatrix& a, std::size_t rank);

/// max_i |v_i|
inline double inf_norm(const CVector& v)
{
    return v.size() == 0 ? 0.0 : std::sqrt(v.cwiseAbs2().maxCoeff());
}

/// Maximum over coordinates of |Im|, compared to 1 + max |Re|.
bool is_numerically_real(const CVector& v, double tol);

} // namespace acs

#endif
