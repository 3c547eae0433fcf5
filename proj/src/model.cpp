#include "acs/model.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace acs {

CVector SymmetryGenerator::apply(const CVector& t) const
{
    if (perm.size() != static_cast<std::size_t>(t.size()))
        throw std::invalid_argument("symmetry generator length does not match parameter count");
    CVector out(t.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        out(i) = (signs.empty() ? 1.0 : signs[i]) * t(perm[i]);
    return out;
}

// ------------------------------------------------------------------- Model

Model::Model(std::variant<Implicit, Explicit> form, std::size_t ambient, Field field)
    : form_(std::move(form)), ambient_dim_(ambient), field_(field)
{
}

Model Model::from_parameterization(PolySystem phi, Field field, SymmetryGroup symmetry)
{
    if (phi.empty())
        throw std::invalid_argument("parameterization must have at least one polynomial");
    const std::size_t n = phi.size();
    Model m(Explicit{std::move(phi)}, n, field);
    for (const auto& g : symmetry.generators) {
        if (g.perm.size() != m.parameter_count() || (!g.signs.empty() && g.signs.size() != g.perm.size()))
            throw std::invalid_argument("symmetry generator does not match the parameter count");
        std::vector<bool> seen(g.perm.size(), false);
        for (auto p : g.perm) {
            if (p >= g.perm.size() || seen[p])
                throw std::invalid_argument("symmetry generator is not a permutation");
            seen[p] = true;
        }
    }
    m.symmetry_ = std::move(symmetry);
    return m;
}

Model Model::from_equations(PolySystem equations, std::optional<CVector> witness, Field field)
{
    const std::size_t n = equations.nvars();
    if (witness) {
        if (static_cast<std::size_t>(witness->size()) != n)
            throw std::invalid_argument("witness length does not match the ambient dimension");
        const double res = inf_norm(evaluate(equations, *witness));
        if (res > 1e-10 * (1.0 + inf_norm(*witness)))
            throw std::invalid_argument("witness is not on the variety (residual " + std::to_string(res) + ")");
    }
    return Model(Implicit{std::move(equations), std::move(witness)}, n, field);
}

const PolySystem& Model::parameterization() const
{
    if (const auto* e = std::get_if<Explicit>(&form_))
        return e->phi;
    throw std::invalid_argument("model is implicit; an explicit parameterization is required");
}

const PolySystem& Model::equations() const
{
    if (const auto* i = std::get_if<Implicit>(&form_))
        return i->equations;
    throw std::invalid_argument("model is explicit; implicit equations are required");
}

const std::optional<CVector>& Model::witness() const
{
    return std::get<Implicit>(form_).witness;
}

void Model::set_dimension(std::size_t d)
{
    if (d > ambient_dim_ || (is_explicit() && d > parameter_count()))
        throw std::invalid_argument("dimension exceeds ambient or parameter count");
    dimension_ = d;
}

std::size_t Model::dim() const
{
    if (!dimension_)
        throw std::logic_error("model dimension has not been computed");
    return *dimension_;
}

CVector Model::ambient_point(const CVector& point_or_param) const
{
    if (is_explicit())
        return evaluate(parameterization(), point_or_param);
    if (static_cast<std::size_t>(point_or_param.size()) != ambient_dim_)
        throw std::invalid_argument("point length does not match the ambient dimension");
    return point_or_param;
}

// --------------------------------------------------------------- dimension

CVector sample_parameter(const Model& model, Rng& rng)
{
    return sample_gaussian_vector(model.parameter_count(), model.field(), rng);
}

std::size_t dimension(Model& model, std::uint64_t seed)
{
    if (!model.is_explicit()) {
        const auto& w = model.witness();
        if (!w)
            throw std::invalid_argument("implicit model needs a witness point to compute its dimension");
        const RankInfo info = numerical_rank(jacobian(model.equations()).evaluate(*w));
        const std::size_t d = model.ambient_dim() - info.rank;
        model.set_dimension(d);
        return d;
    }

    const PolyMatrix jac = jacobian(model.parameterization());
    Rng rng(seed);
    std::vector<std::size_t> last;
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::vector<std::size_t> ranks;
        for (int k = 0; k < 3; ++k)
            ranks.push_back(numerical_rank(jac.evaluate(sample_parameter(model, rng))).rank);
        if (ranks[0] == ranks[1] && ranks[1] == ranks[2]) {
            model.set_dimension(ranks[0]);
            return ranks[0];
        }
        last = ranks;
    }
    throw IrregularModel("Jacobian rank disagrees across random points after 10 attempts (last ranks " +
                         std::to_string(last[0]) + ", " + std::to_string(last[1]) + ", " +
                         std::to_string(last[2]) + ")");
}

TangentFrame tangent_frame(const Model& model, const CVector& point_or_param)
{
    const std::size_t d = model.dim();
    TangentFrame frame;
    if (model.is_explicit()) {
        const CMatrix j = jacobian(model.parameterization()).evaluate(point_or_param);
        const RankInfo info = numerical_rank(j);
        if (info.rank < d)
            throw SingularPoint("Jacobian of the parameterization has rank " + std::to_string(info.rank) +
                                " < dimension " + std::to_string(d) + " at this parameter");
        frame.base_point = model.ambient_point(point_or_param);
        frame.basis = column_space_basis(j, d);
        return frame;
    }
    const std::size_t n = model.ambient_dim();
    if (static_cast<std::size_t>(point_or_param.size()) != n)
        throw std::invalid_argument("point length does not match the ambient dimension");
    const CMatrix j = jacobian(model.equations()).evaluate(point_or_param);
    const RankInfo info = numerical_rank(j);
    if (info.rank < n - d)
        throw SingularPoint("Jacobian of the equations has rank " + std::to_string(info.rank) + " < codimension " +
                            std::to_string(n - d) + " at this point");
    frame.base_point = point_or_param;
    frame.basis = kernel_basis(j, n - d);
    return frame;
}

// ---------------------------------------------------------------- builders

Model build_low_rank_matrix(std::size_t m, std::size_t n, std::size_t r)
{
    if (r < 1 || r > std::min(m, n))
        throw std::invalid_argument("rank must satisfy 1 <= r <= min(m, n)");
    const std::size_t nparams = r * (m + n);
    auto a = [&](std::size_t i, std::size_t q) { return Polynomial::variable(nparams, i * r + q); };
    auto b = [&](std::size_t j, std::size_t q) { return Polynomial::variable(nparams, m * r + j * r + q); };
    std::vector<Polynomial> entries;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Polynomial e(nparams);
            for (std::size_t q = 0; q < r; ++q)
                e += a(i, q) * b(j, q);
            entries.push_back(std::move(e));
        }

    SymmetryGroup group;
    // swap columns q and q+1 of both factors
    for (std::size_t q = 0; q + 1 < r; ++q) {
        SymmetryGenerator g;
        g.perm.resize(nparams);
        std::iota(g.perm.begin(), g.perm.end(), 0);
        for (std::size_t i = 0; i < m; ++i)
            std::swap(g.perm[i * r + q], g.perm[i * r + q + 1]);
        for (std::size_t j = 0; j < n; ++j)
            std::swap(g.perm[m * r + j * r + q], g.perm[m * r + j * r + q + 1]);
        group.generators.push_back(std::move(g));
    }
    // negate column 0 of both factors
    SymmetryGenerator neg;
    neg.perm.resize(nparams);
    std::iota(neg.perm.begin(), neg.perm.end(), 0);
    neg.signs.assign(nparams, 1.0);
    for (std::size_t i = 0; i < m; ++i)
        neg.signs[i * r] = -1.0;
    for (std::size_t j = 0; j < n; ++j)
        neg.signs[m * r + j * r] = -1.0;
    group.generators.push_back(std::move(neg));

    return Model::from_parameterization(PolySystem(nparams, std::move(entries)), Field::Real, std::move(group));
}

std::size_t tensor_index(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& multi)
{
    if (dims.size() != multi.size() || dims.empty())
        throw std::invalid_argument("tensor_index: index rank does not match dims");
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (multi[k] >= dims[k])
            throw std::invalid_argument("tensor_index: index out of range");
    if (dims.size() == 1)
        return multi[0];
    std::size_t slice = 0;
    std::size_t stride = 1;
    for (std::size_t k = 2; k < dims.size(); ++k) {
        slice += multi[k] * stride;
        stride *= dims[k];
    }
    return slice * dims[0] * dims[1] + multi[0] * dims[1] + multi[1];
}

Model build_cp_tensor(const std::vector<std::size_t>& dims, std::size_t r, bool normalized)
{
    if (r < 1 || dims.empty())
        throw std::invalid_argument("cp tensor needs r >= 1 and at least one mode");
    const std::size_t modes = dims.size();
    std::vector<std::size_t> free_len(modes);
    std::vector<std::size_t> offset(modes);
    std::size_t nparams = 0;
    for (std::size_t k = 0; k < modes; ++k) {
        if (dims[k] < 1 || (normalized && k + 1 < modes && dims[k] < 2))
            throw std::invalid_argument("cp tensor mode sizes too small");
        free_len[k] = (normalized && k + 1 < modes) ? dims[k] - 1 : dims[k];
        offset[k] = nparams;
        nparams += r * free_len[k];
    }
    auto factor = [&](std::size_t mode, std::size_t term, std::size_t i) {
        if (i < free_len[mode])
            return Polynomial::variable(nparams, offset[mode] + term * free_len[mode] + i);
        return Polynomial::constant(nparams, 1.0);
    };

    std::size_t total = 1;
    for (auto d : dims)
        total *= d;
    std::vector<Polynomial> entries(total, Polynomial(nparams));
    std::vector<std::size_t> multi(modes, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        // odometer over multi-indices, first mode slowest
        std::size_t rem = flat;
        for (std::size_t k = modes; k-- > 0;) {
            multi[k] = rem % dims[k];
            rem /= dims[k];
        }
        Polynomial e(nparams);
        for (std::size_t q = 0; q < r; ++q) {
            Polynomial prod = Polynomial::constant(nparams, 1.0);
            for (std::size_t k = 0; k < modes; ++k)
                prod = prod * factor(k, q, multi[k]);
            e += prod;
        }
        entries[tensor_index(dims, multi)] = std::move(e);
    }

    SymmetryGroup group;
    for (std::size_t q = 0; q + 1 < r; ++q) {
        SymmetryGenerator g;
        g.perm.resize(nparams);
        std::iota(g.perm.begin(), g.perm.end(), 0);
        for (std::size_t k = 0; k < modes; ++k)
            for (std::size_t i = 0; i < free_len[k]; ++i)
                std::swap(g.perm[offset[k] + q * free_len[k] + i], g.perm[offset[k] + (q + 1) * free_len[k] + i]);
        group.generators.push_back(std::move(g));
    }
    return Model::from_parameterization(PolySystem(nparams, std::move(entries)), Field::Real, std::move(group));
}

Model build_twisted_cubic(std::size_t n)
{
    if (n < 1)
        throw std::invalid_argument("twisted cubic needs n >= 1");
    const Polynomial t = Polynomial::variable(1, 0);
    std::vector<Polynomial> coords;
    for (unsigned k = 1; k <= n; ++k)
        coords.push_back(t.pow(k));
    return Model::from_parameterization(PolySystem(1, std::move(coords)));
}

Model build_linear(const CMatrix& a)
{
    const std::size_t l = a.cols();
    std::vector<Polynomial> vars;
    for (std::size_t j = 0; j < l; ++j)
        vars.push_back(Polynomial::variable(l, j));
    const bool real = a.imag().isZero(0.0);
    return Model::from_parameterization(compose_linear(PolySystem(l, std::move(vars)), a),
                                        real ? Field::Real : Field::Complex);
}

Model veronese_lift(const Model& model, unsigned r)
{
    const PolySystem lifted = substitute(veronese_system(model.ambient_dim(), r), model.parameterization());
    return Model::from_parameterization(lifted, model.field(), model.symmetry());
}

Model difference_model(const Model& model)
{
    const PolySystem& phi = model.parameterization();
    const std::size_t l = phi.nvars();
    std::vector<Polynomial> first, second;
    for (std::size_t j = 0; j < l; ++j) {
        first.push_back(Polynomial::variable(2 * l, j));
        second.push_back(Polynomial::variable(2 * l, l + j));
    }
    const PolySystem p1 = substitute(phi, PolySystem(2 * l, std::move(first)));
    const PolySystem p2 = substitute(phi, PolySystem(2 * l, std::move(second)));
    std::vector<Polynomial> diff;
    for (std::size_t i = 0; i < phi.size(); ++i)
        diff.push_back(p1[i] - p2[i]);
    return Model::from_parameterization(PolySystem(2 * l, std::move(diff)), model.field());
}

// -------------------------------------------------------------------- JSON

json symmetry_to_json(const SymmetryGroup& group)
{
    json arr = json::array();
    for (const auto& g : group.generators) {
        std::vector<std::size_t> one_based(g.perm);
        for (auto& p : one_based)
            ++p;
        json jg{{"perm", one_based}};
        if (!g.signs.empty())
            jg["signs"] = g.signs;
        arr.push_back(std::move(jg));
    }
    return arr;
}

SymmetryGroup symmetry_from_json(const json& j)
{
    SymmetryGroup group;
    for (const auto& jg : j) {
        SymmetryGenerator g;
        for (auto p : jg.at("perm").get<std::vector<std::size_t>>()) {
            if (p < 1)
                throw std::invalid_argument("symmetry permutation entries are 1-based");
            g.perm.push_back(p - 1);
        }
        if (jg.contains("signs"))
            g.signs = jg.at("signs").get<std::vector<double>>();
        group.generators.push_back(std::move(g));
    }
    return group;
}

json model_to_json(const Model& model)
{
    json j{{"ambient_dim", model.ambient_dim()},
           {"form", model.is_explicit() ? "explicit" : "implicit"},
           {"field", to_string(model.field())}};
    if (model.is_explicit()) {
        j["system"] = system_to_json(model.parameterization());
        if (!model.symmetry().empty())
            j["symmetry"] = symmetry_to_json(model.symmetry());
    } else {
        j["system"] = system_to_json(model.equations());
        if (model.witness())
            j["witness"] = vector_to_json(*model.witness());
    }
    if (model.cached_dimension())
        j["dimension"] = *model.cached_dimension();
    return j;
}

Model model_from_json(const json& j)
{
    const auto n = j.at("ambient_dim").get<std::size_t>();
    const auto form = j.at("form").get<std::string>();
    const Field field = field_from_string(j.value("field", std::string("real")));
    PolySystem sys = system_from_json(j.at("system"));
    std::optional<Model> model;
    if (form == "explicit") {
        if (sys.size() != n)
            throw std::invalid_argument("explicit model: system has " + std::to_string(sys.size()) +
                                        " polynomials but ambient_dim is " + std::to_string(n));
        SymmetryGroup group;
        if (j.contains("symmetry"))
            group = symmetry_from_json(j.at("symmetry"));
        model = Model::from_parameterization(std::move(sys), field, std::move(group));
    } else if (form == "implicit") {
        if (sys.nvars() != n)
            throw std::invalid_argument("implicit model: system has " + std::to_string(sys.nvars()) +
                                        " variables but ambient_dim is " + std::to_string(n));
        std::optional<CVector> witness;
        if (j.contains("witness"))
            witness = vector_from_json(j.at("witness"));
        model = Model::from_equations(std::move(sys), std::move(witness), field);
    } else {
        throw std::invalid_argument("model form must be 'explicit' or 'implicit', got '" + form + "'");
    }
    if (j.contains("dimension"))
        model->set_dimension(j.at("dimension").get<std::size_t>());
    return std::move(*model);
}

} // namespace acs
