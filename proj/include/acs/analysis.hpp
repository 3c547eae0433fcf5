#ifndef ACS_ANALYSIS_HPP
#define ACS_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acs/measure.hpp"
#include "acs/model.hpp"
#include "acs/solver.hpp"

namespace acs {

class NoSelectionFound : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PositiveDimensionalFiber : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegreeUnstable : public NumericalError {
public:
    DegreeUnstable(std::size_t first, std::size_t second);
    std::size_t first;
    std::size_t second;
};

enum class Verdict { Yes, No, Inconclusive };

std::string to_string(Verdict v);

struct RecoverabilityResult {
    Verdict verdict = Verdict::Inconclusive;
    /// Largest numerical rank seen, and the rank a recoverable map must reach.
    std::size_t witnessed_rank = 0;
    std::size_t required_rank = 0;
    /// Singular values at the point realizing witnessed_rank.
    Eigen::VectorXd singular_values;
    std::vector<std::size_t> ranks_tried;
    std::uint64_t seed = 0;
    std::string note;
};

/// Explicit: rank of D(mu o phi) at up to 10 random parameters must reach d.
/// Implicit: [D mu; Df](witness) must have rank n.
RecoverabilityResult is_generically_recoverable(const Model& model, const MeasurementMap& map, std::uint64_t seed);

/// d zero-based ambient coordinates whose projection is generically
/// recoverable, chosen by column-pivoted QR of D phi(t)^T.
std::vector<std::size_t> select_recoverable_coordinates(const Model& model, std::uint64_t seed);

struct ConditionResult {
    /// 1 / sigma_d(M Q); +infinity when sigma_d < 1e-14.
    double kappa = 0.0;
    Eigen::VectorXd singular_values;
};

ConditionResult condition_number(const Model& model, const MeasurementMap& map, const CVector& point_or_param);

/// kappa computed from an explicit tangent basis (any orthonormal basis works).
ConditionResult condition_number_from_frame(const CMatrix& map_matrix, const CMatrix& tangent_basis);

struct AmbientSolution {
    CVector point;
    bool real = false;
    /// Parameter (explicit) or ambient (implicit) solutions mapping here.
    std::size_t multiplicity = 1;
    /// Representative parameter for explicit models.
    CVector parameter;
};

struct FiberResult {
    /// Endpoints of the squared system that also satisfy the full fiber system.
    SolutionSet solutions;
    /// Distinct images in ambient space.
    std::vector<AmbientSolution> ambient;
    /// Linear slices added to cut the parameter fiber down to points.
    std::size_t slice_count = 0;
    /// Equations in the square system handed to the tracker.
    std::size_t square_size = 0;
    /// Endpoints of the squared system rejected by the full-system residual filter.
    std::size_t n_filtered = 0;
};

/// Solves mu(x) = y on the model. Explicit models whose parameterization has
/// more than d parameters are sliced by l - d random affine hyperplanes;
/// overdetermined systems are squared by a random linear combination and
/// the endpoints filtered by the full system residual (<= 1e-8).
/// Throws PositiveDimensionalFiber when the fiber cannot be finite.
FiberResult fiber_solve(const Model& model, const MeasurementMap& map, const CVector& y, const TrackerConfig& cfg);

struct FiberTrial {
    std::uint64_t seed = 0;
    std::size_t complex_size = 0;
    std::size_t real_size = 0;
    bool planted_recovered = false;
    bool positive_dimensional = false;
    std::size_t n_diverged = 0;
    std::size_t n_paths = 0;
};

struct FiberStatistics {
    std::size_t s = 0;
    std::vector<FiberTrial> trials;

    bool constant_size() const;
};

/// Plants a generic point, measures it with a generic linear map with s rows,
/// and solves the fiber over C, once per trial.
FiberStatistics fiber_cardinality_experiment(const Model& model, std::size_t s, std::size_t trials,
                                             std::uint64_t seed, const TrackerConfig& base = {});

/// Number of intersection points with a generic affine subspace of
/// codimension d, confirmed with a second independent seed.
std::size_t degree(const Model& model, const TrackerConfig& cfg, std::uint64_t seed);

struct IdentifiabilityBound {
    std::size_t s_min = 0;
    std::size_t difference_dim = 0;
    /// 2d + 1
    std::size_t universal_bound = 0;
    std::vector<std::string> notes;
};

/// s_min = 1 + dim of the difference model.
IdentifiabilityBound everywhere_identifiability_bound(const Model& model, std::uint64_t seed);

/// Checks the generators against phi (invariance to 1e-12 at random points),
/// then maps each parameter solution through phi and deduplicates images
/// with relative tolerance 1e-6.
std::vector<CVector> quotient_by_symmetry(const std::vector<CVector>& parameters, const SymmetryGroup& group,
                                          const Model& model);

struct WellPosednessReport {
    std::size_t model_dim = 0;
    std::size_t n_measurements = 0;
    std::uint64_t seed = 0;
    RecoverabilityResult recoverable;
    Verdict identifiability = Verdict::Inconclusive;
    std::optional<std::size_t> fiber_size;
    std::optional<IdentifiabilityBound> bound;
    std::optional<ConditionResult> condition;
    std::optional<std::size_t> degree;
    std::vector<std::string> notes;
};

json report_to_json(const WellPosednessReport& report);

} // namespace acs

#endif
