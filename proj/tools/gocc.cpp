#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"
#include "gocc/eval/metrics.hpp"
#include "gocc/pipeline/grid_io.hpp"
#include "gocc/pipeline/pipeline.hpp"

namespace {

using gocc::pipeline::Assignments;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string gaussians;
  std::string fusion;
  std::string seed;
  std::string out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset, "openocc | occ3d | kitti | synthetic");
  cmd->add_option("--gaussians", o.gaussians, "anchor count");
  cmd->add_option("--fusion", o.fusion, "addition | concatenation | adaptive");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output path");
  cmd->add_option("--set", o.sets, "extra key=value override (repeatable)");
}

gocc::pipeline::RunConfig resolve(const CommonOptions& o) {
  Assignments overrides;
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw gocc::ValidationError("set", "--set expects key=value, got '" + s + "'");
    }
    overrides[s.substr(0, eq)] = s.substr(eq + 1);
  }
  if (!o.preset.empty()) overrides["preset"] = o.preset;
  if (!o.gaussians.empty()) overrides["gaussians"] = o.gaussians;
  if (!o.fusion.empty()) overrides["fusion"] = o.fusion;
  if (!o.seed.empty()) overrides["seed"] = o.seed;
  if (!o.out.empty()) overrides["out"] = o.out;
  auto config = o.config_path.empty() ? gocc::pipeline::resolve_config({}, overrides)
                                      : gocc::pipeline::load_config(o.config_path, overrides);
  config.validate();
  return config;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian camera-LiDAR semantic occupancy pipeline"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "run the full pipeline on one scene");
  add_common(run, run_opts);

  CommonOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene file");
  add_common(synth, synth_opts);

  std::string pred_path;
  std::string truth_path;
  std::string taxonomy_path;
  bool include_empty = false;
  auto* evalc = app.add_subcommand("eval", "compare a predicted grid with a truth grid");
  evalc->add_option("--pred", pred_path, "predicted GOC1 grid")->required();
  evalc->add_option("--truth", truth_path, "truth GOC1 grid")->required();
  evalc->add_option("--taxonomy", taxonomy_path, "class taxonomy file");
  evalc->add_flag("--include-empty", include_empty, "count the empty class in the mIoU");

  CommonOptions sweep_opts;
  std::string counts = "12800,25600";
  std::string fusions = "addition,concatenation,adaptive";
  auto* sweepc = app.add_subcommand("sweep", "grid over anchor counts and fusion modes");
  add_common(sweepc, sweep_opts);
  sweepc->add_option("--counts", counts, "comma-separated anchor counts");
  sweepc->add_option("--fusions", fusions, "comma-separated fusion modes");

  CommonOptions weights_opts;
  int channels = 25;
  int classes = 17;
  auto* weights = app.add_subcommand("weights-init", "write a seeded parameter bundle");
  add_common(weights, weights_opts);
  weights->add_option("--channels", channels, "lifted feature width");
  weights->add_option("--classes", classes, "semantic class count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto config = resolve(run_opts);
      const auto result = gocc::pipeline::run_pipeline(config);
      std::cout << result.metrics_text;
      std::cout << "grid_digest " << result.grid_digest << '\n';
      std::cout << "config_hash " << result.config_hash << '\n';
      std::cout << "output " << config.output_dir.string() << '\n';
    } else if (*synth) {
      auto config = resolve(synth_opts);
      gocc::pipeline::RunConfig no_degrade = config;
      const auto file = gocc::pipeline::prepare_scene(no_degrade);
      const std::filesystem::path path =
          synth_opts.out.empty() ? std::filesystem::path("scene.gocs") : std::filesystem::path(synth_opts.out);
      gocc::pipeline::save_scene(file, path);
      std::cout << "scene " << path.string() << " blobs " << file.scene.blobs.size() << " digest "
                << gocc::harness::scene_digest(file.scene) << '\n';
    } else if (*evalc) {
      const auto pred = gocc::pipeline::load_grid(pred_path);
      const auto truth = gocc::pipeline::load_grid(truth_path);
      gocc::ClassTaxonomy taxonomy = gocc::ClassTaxonomy::generic(truth.class_count - 1);
      if (!taxonomy_path.empty()) {
        const auto bytes = gocc::read_file(taxonomy_path);
        taxonomy = gocc::ClassTaxonomy::parse({reinterpret_cast<const char*>(bytes.data()), bytes.size()});
      } else if (truth.class_count == 18) {
        taxonomy = gocc::ClassTaxonomy::occupancy_default();
      }
      const auto report = gocc::eval::class_iou(pred, truth);
      std::cout << gocc::eval::format_metrics(report, taxonomy, std::nullopt, !include_empty);
    } else if (*sweepc) {
      const auto config = resolve(sweep_opts);
      std::vector<std::int64_t> count_list;
      for (const auto& c : split(counts)) {
        count_list.push_back(std::stoll(c));
      }
      std::vector<gocc::fusion::FusionMode> mode_list;
      for (const auto& m : split(fusions)) {
        mode_list.push_back(gocc::fusion::parse_fusion_mode(m));
      }
      for (const auto& e : gocc::pipeline::sweep(config, count_list, mode_list)) {
        std::cout << e.gaussian_count << ' ' << gocc::fusion::to_string(e.fusion) << " miou " << e.miou
                  << " digest " << e.grid_digest << " -> " << e.output_dir.string() << '\n';
      }
    } else if (*weights) {
      const auto config = resolve(weights_opts);
      const auto model = gocc::pipeline::model_config_for(config, channels, classes, config.depth_levels);
      const auto specs = gocc::pipeline::model_parameter_specs(model);
      const auto bundle = gocc::ParameterBundle::initialize(specs, config.resolved_weights_seed());
      const std::filesystem::path path =
          weights_opts.out.empty() ? std::filesystem::path("weights.gocw") : std::filesystem::path(weights_opts.out);
      bundle.save(path);
      std::cout << "weights " << path.string() << " tensors " << bundle.size() << '\n';
    }
  } catch (const gocc::ValidationError& e) {
    std::cerr << "error: validation: " << e.field() << ": " << e.what() << '\n';
    return 2;
  } catch (const gocc::Error& e) {
    std::cerr << "error: " << gocc::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
