#pragma once

// Persistence: hex-float JSONL trajectories, their metadata sidecar and small
// file helpers. Hex floats make a saved state reload bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydroelastic/timestepper.hpp"

namespace hydroelastic::io {

using json = nlohmann::json;

std::string to_hex(double v);
/// Accepts hex floats and plain decimals.
double from_hex(const std::string& s);

json state_to_json(const InterfaceState& s);
InterfaceState state_from_json(const json& j);

/// One JSON object per line: {"time", "L", "theta": [...], "gamma": [...]}.
void write_states_jsonl(const std::filesystem::path& path, const std::vector<InterfaceState>& states);
std::vector<InterfaceState> read_states_jsonl(const std::filesystem::path& path);

json params_to_json(const PhysParams& p);
PhysParams params_from_json(const json& j);
json policy_to_json(const StepPolicy& p);

/// SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_sha1(const std::string& content);

/// Sidecar record for a trajectory file.
json trajectory_meta(const Trajectory& traj, const std::string& config_text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

void write_energy_csv(const std::filesystem::path& path, const std::vector<EnergyReport>& rows);

/// Writes <stem>.jsonl, <stem>.meta.json and <stem>.energy.csv under dir.
void write_trajectory(const std::filesystem::path& dir, const std::string& stem,
                      const Trajectory& traj, const std::string& config_text);

}  // namespace hydroelastic::io
