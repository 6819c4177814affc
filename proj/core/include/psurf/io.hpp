#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "psurf/fit.hpp"
#include "psurf/flatten.hpp"
#include "psurf/types.hpp"

namespace psurf {

/// Header-optional CSV of "x,y,z" or "x,y,z,scalar" rows. Parse errors
/// report the 1-based line number.
PointCloud3 read_cloud_csv(const std::string& path);

struct RunManifest {
  FitConfig fit;
  std::optional<FlattenConfig> flatten;
  std::string input_digest;  // FNV-1a 64 hex of the ingested file bytes
  std::string tool_version;
};

/// Writes params.csv, surface.csv (un-centered via the stored centroid,
/// evaluated on the fit lattice), report.txt, and, when a map is given,
/// map.csv ("NA" for masked cells) and map.pgm (plain PGM, min-max scaled
/// over unmasked cells, masked = 0).
void write_outputs(const FitResult& result, const ScalarMap2D* map,
                   const std::string& out_dir, const RunManifest& manifest);

ScalarMap2D read_map_csv(const std::string& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);
std::string fnv1a64_file(const std::string& path);

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

}  // namespace psurf
