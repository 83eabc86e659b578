#pragma once

// JSON forms of results, simulation configs and screening reports.
//
// TestResult keys: method, calibration, statistic, p_value, mdd_sum,
// variance_estimate, n, p, tau, quantile_estimate, bootstrap_draws,
// degenerate_draws (tau and quantile_estimate are null outside quantile tests).

#include <json.hpp>

#include "mdd/screening.hpp"
#include "mdd/simulation.hpp"
#include "mdd/test_result.hpp"

namespace mdd {

nlohmann::ordered_json to_json(const TestResult& r);
nlohmann::ordered_json to_json(const SimulationConfig& c);
nlohmann::ordered_json to_json(const TableRow& row);
nlohmann::ordered_json to_json(const ScreeningReport& report);

/// Keys as written by to_json(SimulationConfig); missing keys keep their
/// defaults, unknown keys raise InvalidConfig.
SimulationConfig simulation_config_from_json(const nlohmann::json& j);

}  // namespace mdd
