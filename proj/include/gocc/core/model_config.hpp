#pragma once

namespace gocc {

// Widths and counts shared by every learned stage.
struct ModelConfig {
  int input_channels = 25;    // lifted feature width (camera and LiDAR planes)
  int model_width = 128;      // head feature width
  int semantic_classes = 17;
  int camera_offsets = 4;     // sampling points per view in the camera branch
  int keypoints = 4;          // LDFA keypoints per anchor
  int depth_levels = 8;
  int depth_chunks = 4;
  int state_width = 16;       // SSM state size per channel
  int dt_rank = 0;            // 0 means ceil(model_width / 16)
  int head_blocks = 4;
  double output_gain = 0.1;   // init gain of the geometry and attribute heads

  int resolved_dt_rank() const { return dt_rank > 0 ? dt_rank : (model_width + 15) / 16; }
  int consistency_width() const { return input_channels / 2 > 0 ? input_channels / 2 : 1; }
  // offsets(3) + log-scales(3) + quaternion(4) + opacity(1) + semantic logits
  int decode_width() const { return 11 + semantic_classes; }

  void validate() const;
};

}  // namespace gocc
