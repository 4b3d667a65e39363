#include "gocc/pipeline/bev.hpp"

#include <string>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"

namespace gocc::pipeline {

std::vector<Rgb> default_palette() {
  return {
      Rgb{112, 128, 144}, Rgb{220, 20, 60},   Rgb{255, 127, 80},  Rgb{255, 158, 0},
      Rgb{233, 150, 70},  Rgb{255, 61, 99},   Rgb{0, 0, 230},     Rgb{47, 79, 79},
      Rgb{255, 140, 0},   Rgb{255, 99, 71},   Rgb{0, 207, 191},   Rgb{175, 0, 75},
      Rgb{75, 0, 75},     Rgb{112, 180, 60},  Rgb{222, 184, 135}, Rgb{0, 175, 0},
      Rgb{135, 60, 0},    Rgb{255, 255, 255},
  };
}

std::vector<std::uint8_t> render_bev_slice(const SemanticOccupancyGrid& grid, int z,
                                           const std::vector<Rgb>& palette) {
  if (z < 0 || z >= grid.spec.dims[2]) {
    throw Error(ErrorCode::index, "slice " + std::to_string(z) + " outside z range [0, " +
                                      std::to_string(grid.spec.dims[2]) + ")");
  }
  if (static_cast<int>(palette.size()) < grid.class_count) {
    throw Error(ErrorCode::shape, "palette has fewer entries than the class count");
  }
  const int w = grid.spec.dims[0];
  const int h = grid.spec.dims[1];
  const std::string header = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Rgb& c = palette[grid.at({x, y, z})];
      out.insert(out.end(), c.begin(), c.end());
    }
  }
  return out;
}

void emit_bev_slice(const SemanticOccupancyGrid& grid, int z, const std::vector<Rgb>& palette,
                    const std::filesystem::path& path) {
  write_file(path, render_bev_slice(grid, z, palette));
}

}  // namespace gocc::pipeline
