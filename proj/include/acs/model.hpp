#ifndef ACS_MODEL_HPP
#define ACS_MODEL_HPP

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "acs/json_io.hpp"
#include "acs/numeric.hpp"
#include "acs/poly.hpp"

namespace acs {

/// Thrown by dimension() when random points disagree on the Jacobian rank.
class IrregularModel : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Thrown when the Jacobian rank at a given point is below the model dimension.
class SingularPoint : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A parameter transformation t -> (signs[i] * t[perm[i]])_i under which
/// the parameterization is invariant.
struct SymmetryGenerator {
    std::vector<std::size_t> perm;
    std::vector<double> signs;

    CVector apply(const CVector& t) const;
};

struct SymmetryGroup {
    std::vector<SymmetryGenerator> generators;

    bool empty() const { return generators.empty(); }
};

/// Signal model, either the vanishing locus of f_1..f_k (implicit) or the
/// image of a parameterization phi (explicit).
class Model {
public:
    struct Implicit {
        PolySystem equations;
        std::optional<CVector> witness;
    };
    struct Explicit {
        PolySystem phi;
    };

    static Model from_parameterization(PolySystem phi, Field field = Field::Real, SymmetryGroup symmetry = {});
    /// Throws std::invalid_argument if the witness does not satisfy the
    /// equations to 1e-10 * (1 + |witness|).
    static Model from_equations(PolySystem equations, std::optional<CVector> witness, Field field = Field::Real);

    bool is_explicit() const { return std::holds_alternative<Explicit>(form_); }
    std::size_t ambient_dim() const { return ambient_dim_; }
    Field field() const { return field_; }

    /// Explicit models only.
    const PolySystem& parameterization() const;
    std::size_t parameter_count() const { return parameterization().nvars(); }
    /// Implicit models only.
    const PolySystem& equations() const;
    const std::optional<CVector>& witness() const;

    const SymmetryGroup& symmetry() const { return symmetry_; }
    void set_symmetry(SymmetryGroup group) { symmetry_ = std::move(group); }

    std::optional<std::size_t> cached_dimension() const { return dimension_; }
    void set_dimension(std::size_t d);
    /// Cached dimension; throws std::logic_error if dimension() was never run.
    std::size_t dim() const;

    /// phi(t) for explicit models, identity for implicit ones.
    CVector ambient_point(const CVector& point_or_param) const;

private:
    Model(std::variant<Implicit, Explicit> form, std::size_t ambient, Field field);

    std::variant<Implicit, Explicit> form_;
    std::size_t ambient_dim_;
    Field field_;
    SymmetryGroup symmetry_;
    std::optional<std::size_t> dimension_;
};

/// Orthonormal basis of the tangent space at a point of the model.
struct TangentFrame {
    CVector base_point;
    CMatrix basis; // n x d, orthonormal columns
};

/// Numerical dimension. Explicit: Jacobian rank of phi agreed upon at three
/// random parameter points (up to 10 attempts). Implicit: n minus the
/// Jacobian rank of f at the witness. Caches the result in the model.
std::size_t dimension(Model& model, std::uint64_t seed);

/// Generic parameter point for an explicit model.
CVector sample_parameter(const Model& model, Rng& rng);

TangentFrame tangent_frame(const Model& model, const CVector& point_or_param);

// Builders. Ambient coordinates of matrices are row-major; tensors are laid
// out slice by slice (see tensor_index).

/// phi(A, B) = A B^T with A (m x r) and B (n x r), parameters A row-major then B row-major.
Model build_low_rank_matrix(std::size_t m, std::size_t n, std::size_t r);

/// Sum of r rank-one tensors. Parameters are grouped by mode, then by rank-one
/// term. When `normalized`, the last coordinate of every factor vector in all
/// modes except the last is fixed to 1. The natural symmetry (permuting the
/// rank-one terms) is attached to the model.
Model build_cp_tensor(const std::vector<std::size_t>& dims, std::size_t r, bool normalized);

/// t -> (t, t^2, ..., t^n)
Model build_twisted_cubic(std::size_t n);

/// phi(t) = A t
Model build_linear(const CMatrix& a);

/// nu_r o phi, ambient dimension binomial(n + r, r).
Model veronese_lift(const Model& model, unsigned r);

/// psi(t1, t2) = phi(t1) - phi(t2)
Model difference_model(const Model& model);

/// Ambient index of a tensor entry. The first two modes form a row-major
/// slice; slices are indexed by the remaining modes with the earliest of
/// them varying fastest. For (4,3,2): index = k*12 + i*3 + j.
std::size_t tensor_index(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& multi);

/// {"ambient_dim", "form", "system", "witness"?, "field", "symmetry"?, "dimension"?}
json model_to_json(const Model& model);
Model model_from_json(const json& j);

json symmetry_to_json(const SymmetryGroup& group);
SymmetryGroup symmetry_from_json(const json& j);

} // namespace acs

#endif
