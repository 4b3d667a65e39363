#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gocc/core/grid.hpp"

namespace gocc::pipeline {

// "GOC1" | version u32 | dims 3 x u32 | class count u32 | voxel size 3 x f32 |
// origin 3 x f32 | labels u8, x fastest.
inline constexpr std::size_t kGridHeaderBytes = 48;
inline constexpr std::uint32_t kGridVersion = 1;

// Origin and voxel size are rounded to f32 on the way out.
std::vector<std::uint8_t> encode_grid(const SemanticOccupancyGrid& grid);

// Decodes one grid from the front of `bytes` and reports how many bytes it
// used. Throws FormatError with the failing offset.
SemanticOccupancyGrid decode_grid_prefix(std::span<const std::uint8_t> bytes, std::size_t& consumed,
                                         std::uint64_t base_offset = 0);
// Whole-buffer decode; trailing bytes are a format error.
SemanticOccupancyGrid decode_grid(std::span<const std::uint8_t> bytes);

void emit_grid(const SemanticOccupancyGrid& grid, const std::filesystem::path& path);
SemanticOccupancyGrid load_grid(const std::filesystem::path& path);

}  // namespace gocc::pipeline
