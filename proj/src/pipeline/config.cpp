#include "gocc/pipeline/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"
#include "gocc/core/rng.hpp"

namespace gocc::pipeline {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& field, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
    throw ValidationError(field, field + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& field, const std::string& v) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError(field, field + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& field, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError(field, field + ": expected an unsigned integer, got '" + v + "'");
  }
  return out;
}

int parse_small_int(const std::string& field, const std::string& v) {
  const std::int64_t out = parse_int(field, v);
  if (out < -1'000'000'000 || out > 1'000'000'000) {
    throw ValidationError(field, field + ": value out of range");
  }
  return static_cast<int>(out);
}

bool parse_bool(const std::string& field, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(field, field + ": expected on/off, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    out.push_back(trim(item));
  }
  return out;
}

Vec3 parse_vec3(const std::string& field, const std::string& v) {
  const auto parts = split_list(v);
  if (parts.size() != 3) {
    throw ValidationError(field, field + ": expected three comma-separated values");
  }
  return {parse_double(field, parts[0]), parse_double(field, parts[1]), parse_double(field, parts[2])};
}

VoxelIndex parse_dims(const std::string& field, const std::string& v) {
  const auto parts = split_list(v);
  if (parts.size() != 3) {
    throw ValidationError(field, field + ": expected three comma-separated integers");
  }
  return {parse_small_int(field, parts[0]), parse_small_int(field, parts[1]), parse_small_int(field, parts[2])};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt3(const Vec3& v) { return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z()); }

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"preset", [](RunConfig& c, const std::string&, const std::string& v) { c.preset = parse_preset(v); }},
      {"grid.origin", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.origin = parse_vec3(k, v); }},
      {"grid.voxel_size", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.voxel_size = parse_vec3(k, v); }},
      {"grid.dims", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.dims = parse_dims(k, v); }},
      {"lidar_range", [](RunConfig& c, const std::string&, const std::string& v) { c.lidar_range = v; }},
      {"gaussians", [](RunConfig& c, const std::string&, const std::string& v) { c.gaussian_count = parse_int("gaussian_count", v); }},
      {"fusion", [](RunConfig& c, const std::string&, const std::string& v) { c.fusion = fusion::parse_fusion_mode(v); }},
      {"smoothing", [](RunConfig& c, const std::string& k, const std::string& v) { c.smoothing = parse_bool(k, v); }},
      {"smoothing.temperature", [](RunConfig& c, const std::string& k, const std::string& v) { c.smoothing_temperature = parse_double(k, v); }},
      {"smoothing.floor", [](RunConfig& c, const std::string& k, const std::string& v) { c.smoothing_floor = parse_double(k, v); }},
      {"smoothing.layers", [](RunConfig& c, const std::string& k, const std::string& v) { c.smoothing_layers = parse_small_int(k, v); }},
      {"head_blocks", [](RunConfig& c, const std::string& k, const std::string& v) { c.head_blocks = parse_small_int(k, v); }},
      {"consensus", [](RunConfig& c, const std::string& k, const std::string& v) { c.consensus = parse_bool(k, v); }},
      {"scan", [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "sequential") c.scan = head::ScanStrategy::sequential;
         else if (v == "chunked") c.scan = head::ScanStrategy::chunked;
         else throw ValidationError(k, "scan: expected sequential or chunked");
       }},
      {"truncation", [](RunConfig& c, const std::string& k, const std::string& v) { c.truncation_sigmas = parse_double(k, v); }},
      {"occupancy_threshold", [](RunConfig& c, const std::string& k, const std::string& v) { c.occupancy_threshold = parse_double(k, v); }},
      {"depth_levels", [](RunConfig& c, const std::string& k, const std::string& v) { c.depth_levels = parse_small_int(k, v); }},
      {"depth_chunks", [](RunConfig& c, const std::string& k, const std::string& v) { c.depth_chunks = parse_small_int(k, v); }},
      {"blobs.min", [](RunConfig& c, const std::string& k, const std::string& v) { c.blob_count_min = parse_small_int(k, v); }},
      {"blobs.max", [](RunConfig& c, const std::string& k, const std::string& v) { c.blob_count_max = parse_small_int(k, v); }},
      {"image.width", [](RunConfig& c, const std::string& k, const std::string& v) { c.image_width = parse_small_int(k, v); }},
      {"image.height", [](RunConfig& c, const std::string& k, const std::string& v) { c.image_height = parse_small_int(k, v); }},
      {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); }},
      {"seed.scene", [](RunConfig& c, const std::string& k, const std::string& v) { c.scene_seed = parse_u64(k, v); }},
      {"seed.weights", [](RunConfig& c, const std::string& k, const std::string& v) { c.weights_seed = parse_u64(k, v); }},
      {"seed.anchors", [](RunConfig& c, const std::string& k, const std::string& v) { c.anchor_seed = parse_u64(k, v); }},
      {"degradation", [](RunConfig& c, const std::string&, const std::string& v) { c.degradation.mode = harness::parse_degradation_mode(v); }},
      {"degradation.camera_noise", [](RunConfig& c, const std::string& k, const std::string& v) { c.degradation.camera_noise_sigma = parse_double(k, v); }},
      {"degradation.camera_dropout", [](RunConfig& c, const std::string& k, const std::string& v) { c.degradation.camera_dropout_fraction = parse_double(k, v); }},
      {"degradation.lidar_noise", [](RunConfig& c, const std::string& k, const std::string& v) { c.degradation.lidar_noise_sigma = parse_double(k, v); }},
      {"degradation.lidar_dropout", [](RunConfig& c, const std::string& k, const std::string& v) { c.degradation.lidar_dropout_fraction = parse_double(k, v); }},
      {"degradation.night_attenuation", [](RunConfig& c, const std::string& k, const std::string& v) { c.degradation.night_attenuation = parse_double(k, v); }},
      {"degradation.headlight_half_angle", [](RunConfig& c, const std::string& k, const std::string& v) { c.degradation.headlight_half_angle_degrees = parse_double(k, v); }},
      {"degradation.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.degradation.seed = parse_u64(k, v); }},
      {"weights", [](RunConfig& c, const std::string&, const std::string& v) { c.weights_path = v; }},
      {"scene", [](RunConfig& c, const std::string&, const std::string& v) { c.scene_path = v; }},
      {"taxonomy", [](RunConfig& c, const std::string&, const std::string& v) { c.taxonomy_path = v; }},
      {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = v; }},
      {"exclude_empty", [](RunConfig& c, const std::string& k, const std::string& v) { c.exclude_empty = parse_bool(k, v); }},
      {"losses", [](RunConfig& c, const std::string& k, const std::string& v) { c.compute_losses = parse_bool(k, v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::openocc: return "openocc";
    case Preset::occ3d: return "occ3d";
    case Preset::kitti: return "kitti";
    case Preset::synthetic: return "synthetic";
  }
  return "synthetic";
}

Preset parse_preset(std::string_view text) {
  if (text == "openocc") return Preset::openocc;
  if (text == "occ3d") return Preset::occ3d;
  if (text == "kitti") return Preset::kitti;
  if (text == "synthetic") return Preset::synthetic;
  throw ValidationError("preset", "unknown preset '" + std::string(text) + "'");
}

PresetDefaults preset_defaults(Preset preset) {
  PresetDefaults d;
  switch (preset) {
    case Preset::openocc:
      d.grid = {Vec3(-51.2, -51.2, -5.0), Vec3(0.2, 0.2, 0.2), {512, 512, 40}};
      d.gaussian_count = 12800;
      break;
    case Preset::occ3d:
      d.grid = {Vec3(-40.0, -40.0, -1.0), Vec3(0.4, 0.4, 0.4), {200, 200, 16}};
      d.gaussian_count = 12800;
      break;
    case Preset::kitti:
      d.grid = {Vec3(0.0, -25.6, -2.0), Vec3(0.2, 0.2, 0.2), {256, 256, 32}};
      d.gaussian_count = 38400;
      break;
    case Preset::synthetic:
      d.grid = {Vec3(-4.0, -4.0, -2.0), Vec3(0.25, 0.25, 0.25), {32, 32, 16}};
      d.gaussian_count = 512;
      break;
  }
  return d;
}

GridSpec apply_lidar_range(const GridSpec& grid, std::string_view range) {
  Vec3 lo;
  Vec3 hi;
  if (range == "input") {
    lo = Vec3(-50.0, -50.0, -5.0);
    hi = Vec3(50.0, 50.0, 3.0);
  } else if (range == "eval") {
    lo = Vec3(-51.2, -51.2, -2.0);
    hi = Vec3(51.2, 51.2, 6.0);
  } else {
    throw ValidationError("lidar_range", "lidar_range must be input or eval, got '" + std::string(range) + "'");
  }
  GridSpec out = grid;
  out.origin = lo;
  for (int a = 0; a < 3; ++a) {
    out.voxel_size[a] = (hi[a] - lo[a]) / grid.dims[a];
  }
  return out;
}

std::uint64_t RunConfig::resolved_scene_seed() const {
  return scene_seed ? *scene_seed : mix64(seed ^ fnv1a("scene"));
}
std::uint64_t RunConfig::resolved_weights_seed() const {
  return weights_seed ? *weights_seed : mix64(seed ^ fnv1a("weights"));
}
std::uint64_t RunConfig::resolved_anchor_seed() const {
  return anchor_seed ? *anchor_seed : mix64(seed ^ fnv1a("anchors"));
}

void RunConfig::validate() const {
  try {
    grid.validate();
  } catch (const Error& e) {
    throw ValidationError("grid", e.what());
  }
  if (gaussian_count < 1) {
    throw ValidationError("gaussian_count", "gaussian_count must be at least 1");
  }
  if (!(smoothing_temperature > 0.0)) {
    throw ValidationError("smoothing.temperature", "smoothing temperature must be positive");
  }
  if (!(smoothing_floor > 0.0)) {
    throw ValidationError("smoothing.floor", "smoothing floor must be positive");
  }
  if (smoothing_layers < 1) {
    throw ValidationError("smoothing.layers", "smoothing.layers must be at least 1");
  }
  if (head_blocks < 0) {
    throw ValidationError("head_blocks", "head_blocks must be non-negative");
  }
  if (!(truncation_sigmas >= 1.0)) {
    throw ValidationError("truncation", "truncation radius must be at least 1 sigma");
  }
  if (!(occupancy_threshold >= 0.0)) {
    throw ValidationError("occupancy_threshold", "occupancy threshold must be non-negative");
  }
  if (depth_levels < 2) {
    throw ValidationError("depth_levels", "depth_levels must be at least 2");
  }
  if (depth_chunks < 2 || depth_chunks > depth_levels) {
    throw ValidationError("depth_chunks", "depth_chunks must lie in [2, depth_levels]");
  }
  if (blob_count_min < 1) {
    throw ValidationError("blobs.min", "a scene needs at least one blob");
  }
  if (blob_count_max < blob_count_min || blob_count_max > 64) {
    throw ValidationError("blobs.max", "blobs.max must lie in [blobs.min, 64]");
  }
  if (image_width < 2 || image_height < 2) {
    throw ValidationError("image", "camera planes need at least 2 x 2 texels");
  }
  degradation.validate();
}

std::string RunConfig::canonical_text() const {
  std::ostringstream out;
  out << "preset = " << to_string(preset) << '\n'
      << "grid.origin = " << fmt3(grid.origin) << '\n'
      << "grid.voxel_size = " << fmt3(grid.voxel_size) << '\n'
      << "grid.dims = " << grid.dims[0] << ',' << grid.dims[1] << ',' << grid.dims[2] << '\n'
      << "gaussians = " << gaussian_count << '\n'
      << "fusion = " << fusion::to_string(fusion) << '\n'
      << "smoothing = " << (smoothing ? "on" : "off") << '\n'
      << "smoothing.temperature = " << fmt(smoothing_temperature) << '\n'
      << "smoothing.floor = " << fmt(smoothing_floor) << '\n'
      << "smoothing.layers = " << smoothing_layers << '\n'
      << "head_blocks = " << head_blocks << '\n'
      << "consensus = " << (consensus ? "on" : "off") << '\n'
      << "scan = " << (scan == head::ScanStrategy::sequential ? "sequential" : "chunked") << '\n'
      << "truncation = " << fmt(truncation_sigmas) << '\n'
      << "occupancy_threshold = " << fmt(occupancy_threshold) << '\n'
      << "depth_levels = " << depth_levels << '\n'
      << "depth_chunks = " << depth_chunks << '\n'
      << "blobs.min = " << blob_count_min << '\n'
      << "blobs.max = " << blob_count_max << '\n'
      << "image.width = " << image_width << '\n'
      << "image.height = " << image_height << '\n'
      << "seed = " << seed << '\n'
      << "seed.scene = " << resolved_scene_seed() << '\n'
      << "seed.weights = " << resolved_weights_seed() << '\n'
      << "seed.anchors = " << resolved_anchor_seed() << '\n'
      << "degradation = " << harness::to_string(degradation.mode) << '\n'
      << "degradation.camera_noise = " << fmt(degradation.camera_noise_sigma) << '\n'
      << "degradation.camera_dropout = " << fmt(degradation.camera_dropout_fraction) << '\n'
      << "degradation.lidar_noise = " << fmt(degradation.lidar_noise_sigma) << '\n'
      << "degradation.lidar_dropout = " << fmt(degradation.lidar_dropout_fraction) << '\n'
      << "degradation.night_attenuation = " << fmt(degradation.night_attenuation) << '\n'
      << "degradation.headlight_half_angle = " << fmt(degradation.headlight_half_angle_degrees) << '\n'
      << "degradation.seed = " << degradation.seed << '\n'
      << "weights = " << weights_path.string() << '\n'
      << "scene = " << scene_path.string() << '\n'
      << "taxonomy = " << taxonomy_path.string() << '\n'
      << "exclude_empty = " << (exclude_empty ? "on" : "off") << '\n'
      << "losses = " << (compute_losses ? "on" : "off") << '\n';
  return out.str();
}

std::string RunConfig::hash() const {
  const std::string text = canonical_text();
  return hex_digest({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

Assignments parse_assignments(std::string_view text) {
  Assignments out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config", "line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) {
      throw ValidationError("config", "line " + std::to_string(number) + ": empty key");
    }
    out[key] = trim(std::string_view(body).substr(eq + 1));
  }
  return out;
}

RunConfig resolve_config(const Assignments& file, const Assignments& overrides) {
  Assignments merged = file;
  for (const auto& [k, v] : overrides) {
    merged[k] = v;
  }
  RunConfig config;
  if (const auto it = merged.find("preset"); it != merged.end()) {
    config.preset = parse_preset(it->second);
  }
  const PresetDefaults defaults = preset_defaults(config.preset);
  config.grid = defaults.grid;
  config.gaussian_count = static_cast<std::int64_t>(defaults.gaussian_count);
  const auto& table = setters();
  for (const auto& [k, v] : merged) {
    const auto it = table.find(k);
    if (it == table.end()) {
      throw ValidationError(k, "unknown config key '" + k + "'");
    }
    it->second(config, k, v);
  }
  if (!config.lidar_range.empty()) {
    config.grid = apply_lidar_range(config.grid, config.lidar_range);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path, const Assignments& overrides) {
  const auto bytes = read_file(path);
  return resolve_config(parse_assignments({reinterpret_cast<const char*>(bytes.data()), bytes.size()}), overrides);
}

}  // namespace gocc::pipeline
