#pragma once

#include "core/report.hpp"

#include <json.hpp>

namespace illumest {

nlohmann::ordered_json report_json_value(const IlluminationReport& report, bool include_runtime);
IlluminationReport report_from_json_value(const nlohmann::ordered_json& j);

} // namespace illumest
