#ifndef ACS_EXPERIMENTS_HPP
#define ACS_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "acs/analysis.hpp"

namespace acs {

/// The incomplete 4 x 3 x 2 tensor with 14 observed entries and its rank-2
/// completion problem, as a built-in fixture.
struct Tensor432Fixture {
    std::vector<std::size_t> dims;
    /// Zero-based ambient indices of the observed entries, in measurement order.
    std::vector<std::size_t> observed;
    CVector values;
    /// Decomposition (a1, a2, b1, b2, c1, c2) of the first completion, with the
    /// normalized coordinates left out.
    CVector planted_parameter;
    /// The two completed tensors as displayed (3 decimals), in ambient order.
    CVector displayed_t1;
    CVector displayed_t2;
    double kappa_t1 = 0.0;
    double kappa_t2 = 0.0;
    /// Ambient index of the unobserved entry (1,1,2) and its value.
    std::size_t shared_index = 0;
    double shared_value = 0.0;
};

Tensor432Fixture tensor432_fixture();

/// Rank-2 model of 4 x 3 x 2 tensors with the a1 <-> a2, b1 <-> b2, c1 <-> c2
/// symmetry, dimension set to 14.
Model tensor432_model();
MeasurementMap tensor432_map();

/// Tracker settings used for the tensor experiment.
TrackerConfig tensor432_config(std::uint64_t seed, unsigned threads);

struct TensorCompletion {
    CVector tensor;
    CVector parameter;
    /// Parameter solutions mapping to this tensor.
    std::size_t multiplicity = 0;
    bool real = false;
    ConditionResult condition;
};

struct Tensor432Result {
    std::uint64_t seed = 0;
    FiberResult fiber;
    std::size_t n_real_parameter_solutions = 0;
    /// Distinct real completions, ordered by condition number.
    std::vector<TensorCompletion> completions;
    /// Value of entry (1,1,2) in each completion.
    std::vector<double> shared_entry;
};

Tensor432Result run_tensor432(std::uint64_t seed, unsigned threads = 0);

struct SweepRow {
    std::size_t s = 0;
    /// "s<d", "s=d" or "s>d".
    std::string regime;
    std::string prediction;
    std::size_t trials = 0;
    /// s < d: number of trials where the rank test did not report "no".
    std::size_t recoverable_trials = 0;
    FiberStatistics statistics;
    bool matches_prediction = false;
};

struct SweepResult {
    std::string name;
    std::size_t model_dim = 0;
    std::size_t ambient_dim = 0;
    std::size_t degree = 0;
    std::uint64_t seed = 0;
    std::vector<SweepRow> rows;
};

/// Generic Gaussian maps with s in {d-1, d, d+1}. Predictions: s = d-1 never
/// recoverable; s = d finite fibers of constant size equal to the degree;
/// s = d+1 the planted point alone.
SweepResult run_fiber_sweep(const std::string& name, Model model, std::size_t trials, std::uint64_t seed,
                            const TrackerConfig& base = {});

/// "twisted-cubic-sweep" and "rank1-sweep".
SweepResult run_named_sweep(const std::string& name, std::size_t trials, std::uint64_t seed, unsigned threads = 0);

json tensor432_to_json(const Tensor432Result& result);
json sweep_to_json(const SweepResult& result);

} // namespace acs

#endif
