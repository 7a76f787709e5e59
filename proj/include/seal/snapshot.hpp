#pragma once

#include <filesystem>
#include <string>

#include "seal/data.hpp"
#include "seal/state.hpp"

namespace seal {

inline constexpr int kSnapshotVersion = 1;

// A generated (or loaded) world plus the tables a simulation needs while running.
// Runs copy the state, so one World serves any number of runs.
struct World {
  SimulationState state;
  VitalTables vitals;
  QualificationTable qualification;
  std::string data_digest;

  bool operator==(const World&) const = default;
};

// A .seal-snap file: a header line "SEAL-SNAP <version> <genesis digest>", then
// length-prefixed JSON records (one per entity, regions first), then an END record.
// Loading a snapshot reproduces the saved state exactly.
// World snapshots also carry the vital and qualification tables.
void save_snapshot(const World& world, const std::filesystem::path& path);
World load_snapshot(const std::filesystem::path& path);

std::string snapshot_to_string(const SimulationState& state);
std::string snapshot_to_string(const World& world);
// Throws SnapshotError on version mismatch, truncation or malformed records.
SimulationState snapshot_from_string(const std::string& text);
World world_from_string(const std::string& text);

}  // namespace seal
