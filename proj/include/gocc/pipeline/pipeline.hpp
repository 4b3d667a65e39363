#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gocc/core/model_config.hpp"
#include "gocc/core/parameters.hpp"
#include "gocc/core/taxonomy.hpp"
#include "gocc/eval/metrics.hpp"
#include "gocc/pipeline/config.hpp"
#include "gocc/pipeline/scene_io.hpp"

namespace gocc::pipeline {

// Every learned tensor of every stage for one model configuration.
std::vector<ParameterSpec> model_parameter_specs(const ModelConfig& config);

ModelConfig model_config_for(const RunConfig& run, int input_channels, int semantic_classes,
                             int depth_levels);

harness::SceneConfig scene_config_for(const RunConfig& run, int semantic_classes);

// The scene file when one is configured, otherwise a synthesized scene; the
// configured degradation is applied either way.
SceneFile prepare_scene(const RunConfig& run);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunResult {
  SemanticOccupancyGrid prediction;
  eval::IoUReport report;
  std::optional<eval::LossSummary> losses;
  std::vector<StageTiming> timings;
  std::string grid_digest;
  std::string config_hash;
  std::string metrics_text;
  std::string manifest_json;
};

// lifting -> smoothing -> fusion -> head -> splat -> eval. Writes
// prediction.goc1, metrics.txt, bev.ppm and manifest.json into the output
// directory unless write_outputs is off.
RunResult run_pipeline(const RunConfig& run);
// Same, on an already prepared scene.
RunResult run_pipeline(const RunConfig& run, const SceneFile& scene);

struct SweepEntry {
  std::int64_t gaussian_count = 0;
  fusion::FusionMode fusion = fusion::FusionMode::adaptive;
  std::filesystem::path output_dir;
  double miou = 0.0;
  std::string grid_digest;
};

// One run per (count, mode) pair into <out>/g<count>_<mode>/, plus a
// sweep.txt summary in <out>.
std::vector<SweepEntry> sweep(const RunConfig& base, const std::vector<std::int64_t>& counts,
                              const std::vector<fusion::FusionMode>& modes);

}  // namespace gocc::pipeline
