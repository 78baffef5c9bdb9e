#pragma once

#include "mpseq/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mpseq {

inline constexpr int kLibraryFormatVersion = 1;

/// Serializes a library to the versioned JSON document. Matrices are stored
/// row-major with explicit dimensions; doubles use shortest round-trip form,
/// so parse(serialize(lib)) reproduces every finite field bit-identically.
std::string serialize_library(const MPLibrary& lib);

/// Parses a library document. Rejects malformed JSON (with byte position),
/// unknown schema versions, and non-finite numeric fields.
MPLibrary parse_library(std::string_view text);

void save_library(const MPLibrary& lib, const std::filesystem::path& path);
MPLibrary load_library(const std::filesystem::path& path);

/// Trajectory CSV with header `t,x,y` or `t,x,y,vx,vy`, one row per sample,
/// strictly increasing t at a constant step. Import shifts t to start at 0.
Trajectory read_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Initial-conditions file: one record per line, `id T x_init y_init x_g y_g`,
/// whitespace separated, `#` comments. Order is execution order. Errors carry
/// the offending line number.
std::vector<InitialCondition> read_conditions(const std::filesystem::path& path);
void write_conditions(const std::vector<InitialCondition>& conditions,
                      const std::filesystem::path& path);

/// Writes content to a temporary file in the target directory and renames it
/// into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace mpseq
