#include "gocc/core/model_config.hpp"

#include "gocc/core/error.hpp"

namespace gocc {

void ModelConfig::validate() const {
  auto positive = [](int value, const char* field) {
    if (value < 1) {
      throw ValidationError(field, "must be at least 1");
    }
  };
  positive(input_channels, "input_channels");
  positive(model_width, "model_width");
  positive(semantic_classes, "semantic_classes");
  positive(camera_offsets, "camera_offsets");
  positive(keypoints, "keypoints");
  positive(depth_levels, "depth_levels");
  positive(state_width, "state_width");
  positive(head_blocks, "head_blocks");
  if (depth_chunks < 2 || depth_chunks > depth_levels) {
    throw ValidationError("depth_chunks", "must lie in [2, depth_levels]");
  }
  if (semantic_classes > 255) {
    throw ValidationError("semantic_classes", "at most 255 semantic classes");
  }
  if (!(output_gain > 0.0)) {
    throw ValidationError("output_gain", "must be positive");
  }
}

}  // namespace gocc
