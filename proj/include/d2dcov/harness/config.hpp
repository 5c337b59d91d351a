#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "d2dcov/simconfig.hpp"

namespace d2dcov {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Key/value view of a flat dotted-key config file. Lines are
/// `section.key = value`; blank lines and `#` comments are ignored.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries parse_config_text(std::string_view text);
ConfigEntries load_config_file(const std::filesystem::path& path);

/// Build a SimConfig from entries, starting from the defaults. Recognized
/// keys mirror the field names:
///   model.cell_radius, model.inner_radius, model.lambda, model.mu, model.k,
///   model.alpha, model.p_c, model.p_i, sim.replications, sim.master_seed,
///   sim.sim_radius, sim.edge_mode (none|guard_ring),
///   sim.interferer_policy (retained|transmitters), sim.workers.
/// Unknown keys or unparsable values throw ConfigError.
SimConfig sim_config_from_entries(const ConfigEntries& entries);

/// Inverse of sim_config_from_entries for manifests; values round-trip
/// exactly.
ConfigEntries sim_config_to_entries(const SimConfig& config);

const char* edge_mode_name(EdgeMode mode);
EdgeMode edge_mode_from_name(std::string_view name);
const char* interferer_policy_name(InterfererPolicy policy);
InterfererPolicy interferer_policy_from_name(std::string_view name);

}  // namespace d2dcov
