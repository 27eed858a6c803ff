#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "lorenz_dcx/classifier.hpp"
#include "lorenz_dcx/equilibria.hpp"
#include "lorenz_dcx/experiments.hpp"
#include "lorenz_dcx/lyapunov.hpp"
#include "lorenz_dcx/map.hpp"

namespace ldcx {

using json = nlohmann::ordered_json;

// Complex numbers serialize as {"re": ..., "im": ...}, states as 3-arrays of them.
json complex_json(const Complexd& z);
json state_json(const State3d& s);
json params_json(const SystemParamsd& p);
json spectrum_json(const Spectrum3<double>& ev);
json equilibrium_json(const EquilibriumReport<double>& rep);
json lyapunov_json(const LyapunovEstimate& est);
json evidence_json(const Evidence& ev);
json label_json(const RegimeLabel& label);
json tolerances_json(const ClassifierTolerances& tol);
json ensemble_json(const EnsembleResult& ens);
json scenario_json(const ScenarioResult& res);
json report_json(const ReproductionReport& rep);

/// Plain-text table; the first line carries `timestamp` and is the only
/// run-dependent content.
std::string summary_text(const ReproductionReport& rep, const std::string& timestamp);

/// k,re_x,im_x,re_y,im_y,re_z,im_z at 17 significant digits.
void write_orbit_csv(std::ostream& out, const Orbit& orbit);
/// k,lambda_max per finite-time window.
void write_series_csv(std::ostream& out, const LyapunovEstimate& est);

/// UTC "YYYYMMDDTHHMMSSZ".
std::string utc_timestamp();

}  // namespace ldcx
