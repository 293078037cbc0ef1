#pragma once

#include <iosfwd>
#include <string>

#include "bearform/simulation.hpp"

namespace bearform {

// Parses the line-oriented `[section]` / `key = value` scenario format and
// returns a fully validated Scenario (graph structure, gain admissibility,
// bearings defined at t = 0). Errors carry the offending line.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& name = "<string>");

// Canonical text form, parseable by parse_scenario_text. Only rotating-rigid
// and static desired families are representable.
std::string write_scenario(const Scenario& scenario);

} // namespace bearform
