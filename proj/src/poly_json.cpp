#include "acs/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace acs {

json complex_to_json(cplx z)
{
    return json{{"re", z.real()}, {"im", z.imag()}};
}

cplx complex_from_json(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_object())
        return {j.at("re").get<double>(), j.value("im", 0.0)};
    throw std::invalid_argument("expected a number or {\"re\",\"im\"} object, got " + j.dump());
}

json vector_to_json(const CVector& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(complex_to_json(v(i)));
    return arr;
}

json real_vector_to_json(const CVector& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i).imag() != 0.0)
            throw std::invalid_argument("real_vector_to_json: nonzero imaginary part");
        arr.push_back(v(i).real());
    }
    return arr;
}

CVector vector_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("expected a JSON array for a vector");
    CVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v(i) = complex_from_json(j[i]);
    return v;
}

json matrix_to_json(const CMatrix& m)
{
    const bool real = m.imag().isZero(0.0);
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back(real ? json(m(i, k).real()) : complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("expected a non-empty array of rows for a matrix");
    const std::size_t cols = j[0].size();
    CMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw std::invalid_argument("matrix rows have inconsistent lengths");
        for (std::size_t k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

json system_to_json(const PolySystem& sys)
{
    json polys = json::array();
    for (const auto& p : sys) {
        json terms = json::array();
        for (const auto& t : p.terms())
            terms.push_back({{"exp", t.monomial.exponents()}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
        polys.push_back(std::move(terms));
    }
    return json{{"nvars", sys.nvars()}, {"polys", std::move(polys)}};
}

PolySystem system_from_json(const json& j)
{
    const auto nvars = j.at("nvars").get<std::size_t>();
    std::vector<Polynomial> polys;
    for (const auto& jp : j.at("polys")) {
        std::vector<Term> terms;
        for (const auto& jt : jp) {
            auto exps = jt.at("exp").get<std::vector<unsigned>>();
            terms.push_back(Term{Monomial(std::move(exps)), {jt.at("re").get<double>(), jt.value("im", 0.0)}});
        }
        polys.emplace_back(nvars, std::move(terms));
    }
    return PolySystem(nvars, std::move(polys));
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace acs
