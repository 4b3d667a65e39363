#include "gocc/pipeline/pipeline.hpp"

#include <chrono>
#include <json.hpp>
#include <sstream>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"
#include "gocc/core/parallel.hpp"
#include "gocc/eval/losses.hpp"
#include "gocc/fusion/fusion.hpp"
#include "gocc/head/head.hpp"
#include "gocc/head/splat.hpp"
#include "gocc/lifting/lifting.hpp"
#include "gocc/pipeline/bev.hpp"
#include "gocc/pipeline/grid_io.hpp"
#include "gocc/smoothing/smoothing.hpp"

namespace gocc::pipeline {
namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<StageTiming>& sink) : sink_(sink) {}
  template <typename F>
  auto time(const std::string& stage, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      record(stage, start);
    } else {
      auto out = body();
      record(stage, start);
      return out;
    }
  }

 private:
  void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    sink_.push_back({stage, dt.count()});
  }
  std::vector<StageTiming>& sink_;
};

ClassTaxonomy taxonomy_for(const RunConfig& run) {
  if (run.taxonomy_path.empty()) {
    return ClassTaxonomy::occupancy_default();
  }
  const auto bytes = read_file(run.taxonomy_path);
  return ClassTaxonomy::parse({reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

ParameterBundle load_weights(const RunConfig& run, const std::vector<ParameterSpec>& specs) {
  if (run.weights_path.empty()) {
    return ParameterBundle::initialize(specs, run.resolved_weights_seed());
  }
  ParameterBundle bundle = ParameterBundle::load(run.weights_path);
  try {
    bundle.validate(specs);
  } catch (const Error& e) {
    throw Error(e.code(), run.weights_path.string() + ": " + e.what());
  }
  return bundle;
}

}  // namespace

std::vector<ParameterSpec> model_parameter_specs(const ModelConfig& config) {
  config.validate();
  std::vector<ParameterSpec> specs = lifting::declare_parameters(config);
  for (auto&& part : {smoothing::declare_parameters(config), fusion::declare_parameters(config),
                      head::declare_parameters(config)}) {
    specs.insert(specs.end(), part.begin(), part.end());
  }
  return specs;
}

ModelConfig model_config_for(const RunConfig& run, int input_channels, int semantic_classes,
                             int depth_levels) {
  ModelConfig m;
  m.input_channels = input_channels;
  m.semantic_classes = semantic_classes;
  m.depth_levels = depth_levels;
  m.depth_chunks = std::min(run.depth_chunks, depth_levels);
  m.head_blocks = run.head_blocks;
  m.validate();
  return m;
}

harness::SceneConfig scene_config_for(const RunConfig& run, int semantic_classes) {
  harness::SceneConfig s;
  s.grid = run.grid;
  s.semantic_classes = semantic_classes;
  s.blob_count_min = run.blob_count_min;
  s.blob_count_max = run.blob_count_max;
  s.depth_levels = run.depth_levels;
  s.image_width = run.image_width;
  s.image_height = run.image_height;
  return s;
}

SceneFile prepare_scene(const RunConfig& run) {
  SceneFile file;
  if (!run.scene_path.empty()) {
    file = load_scene(run.scene_path);
  } else {
    file.taxonomy = taxonomy_for(run);
    file.scene = harness::generate_scene(scene_config_for(run, file.taxonomy.semantic_count()),
                                         run.resolved_scene_seed());
  }
  file.scene = harness::degrade(file.scene, run.degradation);
  return file;
}

RunResult run_pipeline(const RunConfig& run) {
  run.validate();
  return run_pipeline(run, prepare_scene(run));
}

RunResult run_pipeline(const RunConfig& run, const SceneFile& scene_file) {
  run.validate();
  const auto& scene = scene_file.scene;
  const auto& taxonomy = scene_file.taxonomy;
  const GridSpec grid = scene.truth.spec;
  const int semantic = taxonomy.semantic_count();
  const ModelConfig model =
      model_config_for(run, scene.lidar.channels(), semantic, scene.lidar.depth_levels());

  RunResult result;
  result.config_hash = run.hash();
  Stopwatch watch(result.timings);

  const auto specs = model_parameter_specs(model);
  const ParameterBundle bundle = watch.time("weights", [&] { return load_weights(run, specs); });

  AnchorInit init;
  init.semantic_classes = semantic;
  init.feature_width = model.input_channels;
  const auto anchors = watch.time("anchors", [&] {
    return init_anchors(static_cast<std::size_t>(run.gaussian_count), grid, run.resolved_anchor_seed(), init);
  });

  auto lifted = watch.time("lifting", [&] {
    const auto weights = lifting::LiftingWeights::from_bundle(bundle, model);
    const auto chunking = lifting::partition_depths(model.depth_levels, model.depth_chunks, 0, false);
    return lifting::lift_anchors(anchors, scene.cameras, scene.lidar, weights, chunking);
  });

  watch.time("smoothing", [&] {
    if (!run.smoothing) {
      return;
    }
    smoothing::SmoothingConfig sc;
    sc.temperature = run.smoothing_temperature;
    sc.floor = run.smoothing_floor;
    sc.layer_count = run.smoothing_layers;
    sc.validate();
    // Inference: every layer is applied when smoothing is switched on.
    const std::vector<bool> mask(static_cast<std::size_t>(sc.layer_count), true);
    smoothing::smooth_features(lifted.camera, lifted.lidar, mask, smoothing::load_epsilon(bundle), sc);
  });

  const RowMatX fused = watch.time("fusion", [&] {
    const auto weights = fusion::FusionWeights::from_bundle(bundle, model);
    return fusion::fuse_all(run.fusion, lifted.lidar, lifted.camera, weights);
  });

  const auto refined = watch.time("head", [&] {
    const auto weights = head::HeadWeights::from_bundle(bundle, model);
    head::HeadOptions options;
    options.consensus = run.consensus;
    options.scan = run.scan;
    return head::run_head(anchors, fused, weights, grid, options);
  });

  result.prediction = watch.time("splat", [&] {
    head::SplatOptions options;
    options.truncation_sigmas = run.truncation_sigmas;
    options.occupancy_threshold = run.occupancy_threshold;
    return head::splat_to_grid(refined.primitives, grid, semantic, options);
  });

  watch.time("eval", [&] {
    result.report = eval::class_iou(result.prediction, scene.truth);
    if (run.compute_losses) {
      const RowMatX probs = class_probabilities(result.prediction);
      eval::LossWeights lw;
      lw.class_weights = Eigen::Map<const VecX>(taxonomy.class_weights.data(),
                                                static_cast<Eigen::Index>(taxonomy.class_weights.size()));
      eval::LossSummary losses;
      losses.ce = eval::weighted_ce(probs, scene.truth.labels, lw.class_weights);
      losses.lovasz = eval::lovasz_softmax(probs, scene.truth.labels, scene.truth.empty_id());
      losses.total = eval::total_loss(losses.ce, losses.lovasz, lw);
      result.losses = losses;
    }
  });

  const auto encoded = encode_grid(result.prediction);
  result.grid_digest = hex_digest(encoded);
  result.metrics_text = eval::format_metrics(result.report, taxonomy, result.losses, run.exclude_empty);

  nlohmann::ordered_json manifest;
  manifest["config_hash"] = result.config_hash;
  manifest["grid_digest"] = result.grid_digest;
  manifest["seeds"] = {{"master", run.seed},
                       {"scene", run.resolved_scene_seed()},
                       {"weights", run.resolved_weights_seed()},
                       {"anchors", run.resolved_anchor_seed()},
                       {"degradation", run.degradation.seed}};
  manifest["gaussian_count"] = run.gaussian_count;
  manifest["fusion"] = std::string(fusion::to_string(run.fusion));
  manifest["grid"] = {{"origin", {grid.origin.x(), grid.origin.y(), grid.origin.z()}},
                      {"voxel_size", {grid.voxel_size.x(), grid.voxel_size.y(), grid.voxel_size.z()}},
                      {"dims", {grid.dims[0], grid.dims[1], grid.dims[2]}}};
  manifest["threads"] = thread_count();
  manifest["parameter_tensors"] = bundle.size();
  try {
    manifest["miou"] = eval::mean_iou(result.report, run.exclude_empty);
  } catch (const Error&) {
    manifest["miou"] = nullptr;
  }
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
  double total = 0.0;
  for (const auto& t : result.timings) {
    timings[t.stage] = t.seconds;
    total += t.seconds;
  }
  timings["total"] = total;
  manifest["timings_seconds"] = timings;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parse_assignments(run.canonical_text())) {
    config[k] = v;
  }
  manifest["config"] = config;
  result.manifest_json = manifest.dump(2) + "\n";

  if (run.write_outputs) {
    std::error_code ec;
    std::filesystem::create_directories(run.output_dir, ec);
    if (ec) {
      throw Error(ErrorCode::io, "cannot create " + run.output_dir.string() + ": " + ec.message());
    }
    write_file(run.output_dir / "prediction.goc1", encoded);
    write_text_file(run.output_dir / "metrics.txt", result.metrics_text);
    emit_bev_slice(result.prediction, grid.dims[2] / 2, default_palette(), run.output_dir / "bev.ppm");
    write_text_file(run.output_dir / "manifest.json", result.manifest_json);
  }
  return result;
}

std::vector<SweepEntry> sweep(const RunConfig& base, const std::vector<std::int64_t>& counts,
                              const std::vector<fusion::FusionMode>& modes) {
  base.validate();
  const SceneFile scene = prepare_scene(base);
  std::vector<SweepEntry> entries;
  std::ostringstream summary;
  summary << "# gaussians fusion miou grid_digest\n";
  for (std::int64_t count : counts) {
    for (fusion::FusionMode mode : modes) {
      RunConfig run = base;
      run.gaussian_count = count;
      run.fusion = mode;
      run.output_dir = base.output_dir / ("g" + std::to_string(count) + "_" + std::string(fusion::to_string(mode)));
      const RunResult r = run_pipeline(run, scene);
      SweepEntry e;
      e.gaussian_count = count;
      e.fusion = mode;
      e.output_dir = run.output_dir;
      e.grid_digest = r.grid_digest;
      try {
        e.miou = eval::mean_iou(r.report, run.exclude_empty);
      } catch (const Error&) {
        e.miou = 0.0;
      }
      summary << count << ' ' << fusion::to_string(mode) << ' ' << e.miou << ' ' << e.grid_digest << '\n';
      entries.push_back(std::move(e));
    }
  }
  if (base.write_outputs) {
    std::filesystem::create_directories(base.output_dir);
    write_text_file(base.output_dir / "sweep.txt", summary.str());
  }
  return entries;
}

}  // namespace gocc::pipeline
