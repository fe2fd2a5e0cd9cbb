#ifndef RHOSTAR_REPORT_JSON_HPP
#define RHOSTAR_REPORT_JSON_HPP

#include "rhostar/chernoff.hpp"
#include "rhostar/model.hpp"
#include "rhostar/montecarlo.hpp"
#include "rhostar/sweep.hpp"

#include <json.hpp>

#include <string>

namespace rhostar {

/// {"B": [[...], ...], "Pi": [...]}; validated. Throws IoFailure on malformed input.
BlockModel model_from_json(const nlohmann::json& j);
BlockModel read_model_file(const std::string& path);

nlohmann::json to_json(const BlockModel& model);
nlohmann::json to_json(const ChernoffReport& report);
nlohmann::json to_json(const PreferenceReport& report);
nlohmann::json to_json(const CltReport& report);
nlohmann::json to_json(const RegionSummary& summary);

}  // namespace rhostar

#endif
