#include <cmath>

#include "acs/analysis.hpp"

namespace acs {

namespace {

json real_array(const Eigen::VectorXd& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v(i));
    return out;
}

// JSON has no infinity; an unbounded condition number is written as null.
json finite_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

} // namespace

json report_to_json(const WellPosednessReport& report)
{
    json j;
    j["model_dim"] = report.model_dim;
    j["n_measurements"] = report.n_measurements;
    j["seed"] = report.seed;

    const auto& rec = report.recoverable;
    j["recoverable"] = {
        {"verdict", to_string(rec.verdict)},
        {"witnessed_rank", rec.witnessed_rank},
        {"required_rank", rec.required_rank},
        {"singular_values", real_array(rec.singular_values)},
        {"ranks_tried", rec.ranks_tried},
        {"seed", rec.seed},
    };
    if (!rec.note.empty())
        j["recoverable"]["note"] = rec.note;

    json ident = {{"verdict", to_string(report.identifiability)}};
    ident["fiber_size"] = report.fiber_size ? json(*report.fiber_size) : json(nullptr);
    if (report.bound) {
        ident["s_min"] = report.bound->s_min;
        ident["difference_dim"] = report.bound->difference_dim;
        ident["universal_bound"] = report.bound->universal_bound;
        ident["notes"] = report.bound->notes;
    }
    j["identifiability"] = ident;

    if (report.condition)
        j["condition"] = {{"kappa", finite_or_null(report.condition->kappa)},
                          {"singular_values", real_array(report.condition->singular_values)}};
    else
        j["condition"] = nullptr;
    j["degree"] = report.degree ? json(*report.degree) : json(nullptr);
    j["notes"] = report.notes;
    return j;
}

} // namespace acs
