#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "cfmimo/experiment.hpp"

namespace cfmimo {

/// Flat `section.key -> value` view of a config file.
using KeyValues = std::map<std::string, std::string>;

/// Parses `section.key = value` lines. `[section]` headers prefix the keys
/// that follow them; `#` and `;` start comments.
KeyValues parse_key_values(std::istream& in);

/// Builds and validates an experiment. Unknown keys are rejected.
ExperimentSpec experiment_from_key_values(const KeyValues& kv);

ExperimentSpec load_experiment(const std::string& path);

}  // namespace cfmimo
