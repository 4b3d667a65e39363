#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gocc/core/grid.hpp"
#include "gocc/fusion/fusion.hpp"
#include "gocc/harness/degrade.hpp"
#include "gocc/head/ssm.hpp"

namespace gocc::pipeline {

enum class Preset { openocc, occ3d, kitti, synthetic };

std::string_view to_string(Preset preset);
Preset parse_preset(std::string_view text);

struct PresetDefaults {
  GridSpec grid;
  std::size_t gaussian_count = 0;
};

PresetDefaults preset_defaults(Preset preset);

// The two published LiDAR ranges, kept side by side: "input" is
// [-50, 50] x [-50, 50] x [-5, 3] m, "eval" is [-51.2, 51.2]^2 x [-2, 6] m.
// Applying one keeps the dims and recomputes the voxel size.
GridSpec apply_lidar_range(const GridSpec& grid, std::string_view range);

struct RunConfig {
  Preset preset = Preset::synthetic;
  GridSpec grid;                       // resolved from the preset unless overridden
  std::string lidar_range;             // "", "input" or "eval"
  std::int64_t gaussian_count = 0;     // preset default unless assigned
  fusion::FusionMode fusion = fusion::FusionMode::adaptive;
  bool smoothing = false;
  double smoothing_temperature = 1.0;
  double smoothing_floor = 1e-6;
  int smoothing_layers = 1;
  int head_blocks = 4;
  bool consensus = true;
  head::ScanStrategy scan = head::ScanStrategy::sequential;
  double truncation_sigmas = 3.0;
  double occupancy_threshold = 0.1;
  int depth_levels = 8;
  int depth_chunks = 4;
  int blob_count_min = 3;
  int blob_count_max = 16;
  int image_width = 64;
  int image_height = 32;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> scene_seed;
  std::optional<std::uint64_t> weights_seed;
  std::optional<std::uint64_t> anchor_seed;
  harness::DegradationConfig degradation;
  std::filesystem::path weights_path;  // empty: initialize from the weights seed
  std::filesystem::path scene_path;    // empty: synthesize from the scene seed
  std::filesystem::path taxonomy_path; // empty: built-in taxonomy
  std::filesystem::path output_dir = "gocc_out";
  bool exclude_empty = true;
  bool compute_losses = true;
  bool write_outputs = true;

  std::uint64_t resolved_scene_seed() const;
  std::uint64_t resolved_weights_seed() const;
  std::uint64_t resolved_anchor_seed() const;

  // Throws ValidationError naming the first bad field.
  void validate() const;

  // Canonical "key = value" text of every field; the config hash is its digest.
  std::string canonical_text() const;
  std::string hash() const;
};

// Flat "key = value" assignments, '#' comments, blank lines ignored.
using Assignments = std::map<std::string, std::string, std::less<>>;
Assignments parse_assignments(std::string_view text);

// Starts from the preset (taken from the assignments when present), then
// applies every other assignment in key order. Unknown keys are validation
// errors. Override maps are applied after the file, so flags win.
RunConfig resolve_config(const Assignments& file, const Assignments& overrides = {});

RunConfig load_config(const std::filesystem::path& path, const Assignments& overrides = {});

}  // namespace gocc::pipeline
