#include "acs/measure.hpp"

#include <stdexcept>
#include <string>

namespace acs {

MeasurementMap::MeasurementMap(Kind kind, CMatrix matrix, CVector offset)
    : kind_(kind), matrix_(std::move(matrix)), offset_(std::move(offset))
{
    if (matrix_.rows() < 1 || matrix_.cols() < 1)
        throw std::invalid_argument("measurement map needs s >= 1 and n >= 1");
    if (offset_.size() != matrix_.rows())
        throw std::invalid_argument("affine offset length must equal the number of measurements");
}

MeasurementMap MeasurementMap::linear(CMatrix matrix)
{
    const auto s = matrix.rows();
    return MeasurementMap(Kind::Linear, std::move(matrix), CVector::Zero(s));
}

MeasurementMap MeasurementMap::affine(CMatrix matrix, CVector offset)
{
    return MeasurementMap(Kind::Affine, std::move(matrix), std::move(offset));
}

MeasurementMap MeasurementMap::projection(std::size_t n, std::vector<std::size_t> indices)
{
    if (indices.empty())
        throw std::invalid_argument("projection needs at least one index");
    std::vector<bool> seen(n, false);
    CMatrix m = CMatrix::Zero(indices.size(), n);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const std::size_t i = indices[r];
        if (i >= n)
            throw std::invalid_argument("projection index " + std::to_string(i) + " out of range for n = " +
                                        std::to_string(n));
        if (seen[i])
            throw std::invalid_argument("duplicate projection index " + std::to_string(i));
        seen[i] = true;
        m(r, i) = 1.0;
    }
    MeasurementMap map(Kind::Projection, std::move(m), CVector::Zero(indices.size()));
    map.indices_ = std::move(indices);
    return map;
}

CVector MeasurementMap::apply(const CVector& x) const
{
    if (static_cast<std::size_t>(x.size()) != cols())
        throw std::invalid_argument("point length does not match the map's domain dimension");
    if (kind_ == Kind::Projection) {
        CVector out(indices_.size());
        for (std::size_t r = 0; r < indices_.size(); ++r)
            out(r) = x(indices_[r]);
        return out;
    }
    return matrix_ * x + offset_;
}

MeasurementMap sample_generic_linear(std::size_t n, std::size_t s, Field field, std::uint64_t seed)
{
    Rng rng(seed);
    MeasurementMap map = MeasurementMap::linear(sample_gaussian_matrix(s, n, field, rng));
    map.set_seed(seed);
    return map;
}

MeasurementMap coordinate_projection(std::size_t n, std::vector<std::size_t> indices)
{
    return MeasurementMap::projection(n, std::move(indices));
}

PolySystem fiber_system(const Model& model, const MeasurementMap& map, const CVector& y)
{
    if (map.cols() != model.ambient_dim())
        throw std::invalid_argument("map domain dimension " + std::to_string(map.cols()) +
                                    " does not match model ambient dimension " +
                                    std::to_string(model.ambient_dim()));
    if (static_cast<std::size_t>(y.size()) != map.rows())
        throw std::invalid_argument("measurement vector has length " + std::to_string(y.size()) + ", expected " +
                                    std::to_string(map.rows()));
    // affine shift folded into the right-hand side
    const CVector rhs = map.offset() - y;
    if (model.is_explicit())
        return add_constants(compose_linear(model.parameterization(), map.matrix()), rhs);

    const std::size_t n = model.ambient_dim();
    std::vector<Polynomial> coords;
    for (std::size_t i = 0; i < n; ++i)
        coords.push_back(Polynomial::variable(n, i));
    const PolySystem measured = add_constants(compose_linear(PolySystem(n, std::move(coords)), map.matrix()), rhs);
    return stack(model.equations(), measured);
}

json map_to_json(const MeasurementMap& map)
{
    json j{{"s", map.rows()}, {"n", map.cols()}};
    switch (map.kind()) {
    case MeasurementMap::Kind::Projection: {
        j["kind"] = "projection";
        std::vector<std::size_t> one_based(map.indices());
        for (auto& i : one_based)
            ++i;
        j["indices"] = one_based;
        break;
    }
    case MeasurementMap::Kind::Linear:
        j["kind"] = "linear";
        j["matrix"] = matrix_to_json(map.matrix());
        break;
    case MeasurementMap::Kind::Affine:
        j["kind"] = "affine";
        j["matrix"] = matrix_to_json(map.matrix());
        j["offset"] = vector_to_json(map.offset());
        break;
    }
    if (map.seed())
        j["seed"] = *map.seed();
    return j;
}

MeasurementMap map_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    const auto n = j.at("n").get<std::size_t>();
    std::optional<MeasurementMap> map;
    if (kind == "projection") {
        std::vector<std::size_t> idx;
        for (auto i : j.at("indices").get<std::vector<long long>>()) {
            if (i < 1)
                throw std::invalid_argument("projection indices are 1-based");
            idx.push_back(static_cast<std::size_t>(i - 1));
        }
        map = MeasurementMap::projection(n, std::move(idx));
    } else if (kind == "linear" || kind == "affine") {
        CMatrix m = matrix_from_json(j.at("matrix"));
        if (static_cast<std::size_t>(m.cols()) != n)
            throw std::invalid_argument("map matrix has " + std::to_string(m.cols()) + " columns, expected n = " +
                                        std::to_string(n));
        if (kind == "linear")
            map = MeasurementMap::linear(std::move(m));
        else
            map = MeasurementMap::affine(std::move(m), vector_from_json(j.at("offset")));
    } else {
        throw std::invalid_argument("unknown map kind '" + kind + "'");
    }
    if (j.contains("s") && j.at("s").get<std::size_t>() != map->rows())
        throw std::invalid_argument("map 's' does not match its rows");
    if (j.contains("seed"))
        map->set_seed(j.at("seed").get<std::uint64_t>());
    return std::move(*map);
}

} // namespace acs
