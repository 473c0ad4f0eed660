#pragma once

#include <string>

#include "admfreq/keyvalue.hpp"
#include "admfreq/signal.hpp"

namespace admfreq {

ScenarioSpec parse_scenario(const KeyValueFile& kv);
ScenarioSpec parse_scenario_text(const std::string& text, const std::string& source = "<scenario>");
ScenarioSpec load_scenario(const std::string& path);

}  // namespace admfreq
