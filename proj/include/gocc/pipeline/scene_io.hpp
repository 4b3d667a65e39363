#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gocc/core/taxonomy.hpp"
#include "gocc/harness/scene.hpp"

namespace gocc::pipeline {

struct SceneFile {
  harness::SyntheticScene scene;
  ClassTaxonomy taxonomy;
};

// Text header (seed, grid, taxonomy, blobs, LiDAR layout, camera rig) closed
// by an "end_header" line, then every LiDAR plane and camera plane as
// little-endian f32, then the truth grid as a GOC1 record.
std::vector<std::uint8_t> encode_scene(const SceneFile& file);
SceneFile decode_scene(std::span<const std::uint8_t> bytes);

void save_scene(const SceneFile& file, const std::filesystem::path& path);
SceneFile load_scene(const std::filesystem::path& path);

}  // namespace gocc::pipeline
