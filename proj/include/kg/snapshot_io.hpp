#pragma once

#include <filesystem>
#include <vector>

#include "kg/field.hpp"

namespace kg {

/// Writes `<base>.raw` (little-endian f64, x-fastest) and `<base>.meta.json`.
void write_snapshot(const Field3D& f, double dt, const std::filesystem::path& base);

/// Reads a snapshot given either its .meta.json or its .raw path.
Field3D read_snapshot(const std::filesystem::path& path);

/// All .meta.json files in `dir`, ordered by their recorded time.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

}  // namespace kg
