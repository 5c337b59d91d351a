#include "d2dcov/harness/config.hpp"

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace d2dcov {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE)
    throw ConfigError("config: bad number for " + key + ": '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long out = std::strtoull(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE)
    throw ConfigError("config: bad integer for " + key + ": '" + value + "'");
  return static_cast<std::uint64_t>(out);
}

int parse_int(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long out = std::strtol(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty() || errno == ERANGE)
    throw ConfigError("config: bad integer for " + key + ": '" + value + "'");
  return static_cast<int>(out);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries entries;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) +
                        " is not 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(line_no) +
                        " has an empty key or value");
    entries[key] = value;
  }
  return entries;
}

ConfigEntries load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

SimConfig sim_config_from_entries(const ConfigEntries& entries) {
  SimConfig config;
  for (const auto& [key, value] : entries) {
    if (key == "model.cell_radius")
      config.model.cell_radius = parse_double(key, value);
    else if (key == "model.inner_radius")
      config.model.inner_radius = parse_double(key, value);
    else if (key == "model.lambda")
      config.model.lambda = parse_double(key, value);
    else if (key == "model.mu")
      config.model.mu = parse_double(key, value);
    else if (key == "model.k")
      config.model.k = parse_double(key, value);
    else if (key == "model.alpha")
      config.model.alpha = parse_double(key, value);
    else if (key == "model.p_c")
      config.model.p_c = parse_double(key, value);
    else if (key == "model.p_i")
      config.model.p_i = parse_double(key, value);
    else if (key == "sim.replications")
      config.replications = parse_int(key, value);
    else if (key == "sim.master_seed")
      config.master_seed = parse_u64(key, value);
    else if (key == "sim.sim_radius")
      config.sim_radius = parse_double(key, value);
    else if (key == "sim.edge_mode")
      config.edge_mode = edge_mode_from_name(value);
    else if (key == "sim.interferer_policy")
      config.interferer_policy = interferer_policy_from_name(value);
    else if (key == "sim.workers")
      config.workers = parse_int(key, value);
    else
      throw ConfigError("config: unknown key '" + key + "'");
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

ConfigEntries sim_config_to_entries(const SimConfig& config) {
  ConfigEntries entries;
  entries["model.cell_radius"] = format_double(config.model.cell_radius);
  entries["model.inner_radius"] = format_double(config.model.inner_radius);
  entries["model.lambda"] = format_double(config.model.lambda);
  entries["model.mu"] = format_double(config.model.mu);
  entries["model.k"] = format_double(config.model.k);
  entries["model.alpha"] = format_double(config.model.alpha);
  entries["model.p_c"] = format_double(config.model.p_c);
  entries["model.p_i"] = format_double(config.model.p_i);
  entries["sim.replications"] = std::to_string(config.replications);
  entries["sim.master_seed"] = std::to_string(config.master_seed);
  entries["sim.sim_radius"] = format_double(config.sim_radius);
  entries["sim.edge_mode"] = edge_mode_name(config.edge_mode);
  entries["sim.interferer_policy"] =
      interferer_policy_name(config.interferer_policy);
  entries["sim.workers"] = std::to_string(config.workers);
  return entries;
}

const char* edge_mode_name(EdgeMode mode) {
  return mode == EdgeMode::kGuardRing ? "guard_ring" : "none";
}

EdgeMode edge_mode_from_name(std::string_view name) {
  if (name == "none") return EdgeMode::kNone;
  if (name == "guard_ring") return EdgeMode::kGuardRing;
  throw ConfigError("config: unknown edge mode '" + std::string(name) +
                    "' (use none|guard_ring)");
}

const char* interferer_policy_name(InterfererPolicy policy) {
  return policy == InterfererPolicy::kTransmitters ? "transmitters" : "retained";
}

InterfererPolicy interferer_policy_from_name(std::string_view name) {
  if (name == "retained") return InterfererPolicy::kRetainedNodes;
  if (name == "transmitters") return InterfererPolicy::kTransmitters;
  throw ConfigError("config: unknown interferer policy '" + std::string(name) +
                    "' (use retained|transmitters)");
}

}  // namespace d2dcov
