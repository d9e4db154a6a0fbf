#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "rpslab/empirical_lab.hpp"
#include "rpslab/experiment.hpp"
#include "rpslab/summability.hpp"
#include "rpslab/theory_engine.hpp"

namespace rpslab {

using Json = nlohmann::ordered_json;

/// Finite values stay numbers; infinities and NaN become "inf", "-inf", "nan".
Json json_number(double x);

Json to_json(const Quantity& q);
Json to_json(const Characteristics& c);
Json to_json(const SeriesVerdict& v);
Json to_json(const ConditionVerdict& v);
Json to_json(const ExperimentReport& r);
Json to_json(const GrowthFit& fit);

/// Two-space indented document with a trailing newline.
std::string dump(const Json& doc);

/// index,seed,estimate,stability_gap,fit_residual,skipped,error
std::string replicates_csv(const ExperimentReport& r);

/// r,max_modulus,ln_max_modulus,ln_ln_max_modulus,fitted_ln_max_modulus
std::string sweep_csv(const GrowthFit& fit, double rho);

}  // namespace rpslab
