#ifndef ACS_MEASURE_HPP
#define ACS_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "acs/model.hpp"

namespace acs {

/// Linear, coordinate-projection or affine map k^n -> k^s.
class MeasurementMap {
public:
    enum class Kind { Linear, Projection, Affine };

    static MeasurementMap linear(CMatrix matrix);
    /// Zero-based, distinct, in-range indices; the output keeps their order.
    static MeasurementMap projection(std::size_t n, std::vector<std::size_t> indices);
    static MeasurementMap affine(CMatrix matrix, CVector offset);

    Kind kind() const { return kind_; }
    std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(matrix_.cols()); }
    /// Dense s x n matrix; projections are represented by selector rows.
    const CMatrix& matrix() const { return matrix_; }
    /// Zero unless the map is affine.
    const CVector& offset() const { return offset_; }
    /// Only meaningful for projections.
    const std::vector<std::size_t>& indices() const { return indices_; }

    std::optional<std::uint64_t> seed() const { return seed_; }
    void set_seed(std::uint64_t seed) { seed_ = seed; }

    CVector apply(const CVector& x) const;

private:
    MeasurementMap(Kind kind, CMatrix matrix, CVector offset);

    Kind kind_;
    CMatrix matrix_;
    CVector offset_;
    std::vector<std::size_t> indices_;
    std::optional<std::uint64_t> seed_;
};

/// i.i.d. (complex) standard Gaussian s x n matrix from the seeded generator.
MeasurementMap sample_generic_linear(std::size_t n, std::size_t s, Field field, std::uint64_t seed);

MeasurementMap coordinate_projection(std::size_t n, std::vector<std::size_t> indices);

/// Explicit models: the s polynomials M phi(t) + b - y in the parameters.
/// Implicit models: (f(x), M x + b - y) in the ambient coordinates.
PolySystem fiber_system(const Model& model, const MeasurementMap& map, const CVector& y);

/// {"kind": "linear"|"projection"|"affine", "s", "n", "matrix"?, "indices"? (1-based), "offset"?, "seed"?}
json map_to_json(const MeasurementMap& map);
MeasurementMap map_from_json(const json& j);

} // namespace acs

#endif
