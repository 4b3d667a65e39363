#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gocc/core/grid.hpp"

namespace gocc::pipeline {

using Rgb = std::array<std::uint8_t, 3>;

// 18 entries: 17 semantic colours then the empty-class background.
std::vector<Rgb> default_palette();

// Binary P6 image of one XY slice, X across and Y down, one pixel per voxel.
// Throws an index error for z outside the grid and a shape error when the
// palette does not cover every class.
std::vector<std::uint8_t> render_bev_slice(const SemanticOccupancyGrid& grid, int z,
                                           const std::vector<Rgb>& palette);
void emit_bev_slice(const SemanticOccupancyGrid& grid, int z, const std::vector<Rgb>& palette,
                    const std::filesystem::path& path);

}  // namespace gocc::pipeline
