#pragma once

#include <string>
#include <vector>

#include "spinmech/config.hpp"

namespace spinmech {

inline constexpr const char* tool_version = "1.0.0";

// Executes one named recipe and returns the list of files written.
// Valid names: field-map, esr-map, mech-response, rabi, triplet,
// mollow-sweep, scales, report.
std::vector<std::string> run_subcommand(const std::string& name, const SystemConfig& config,
                                        const std::string& out_dir, int threads);

} // namespace spinmech
