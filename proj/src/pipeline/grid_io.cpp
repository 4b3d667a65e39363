#include "gocc/pipeline/grid_io.hpp"

#include <string>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"

namespace gocc::pipeline {

std::vector<std::uint8_t> encode_grid(const SemanticOccupancyGrid& grid) {
  grid.spec.validate();
  if (grid.labels.size() != grid.spec.voxel_count()) {
    throw Error(ErrorCode::shape, "label array does not match the grid dims");
  }
  if (grid.class_count < 1 || grid.class_count > 256) {
    throw Error(ErrorCode::shape, "class count does not fit in u8 labels");
  }
  ByteWriter w;
  w.buffer().reserve(kGridHeaderBytes + grid.labels.size());
  w.tag("GOC1");
  w.u32(kGridVersion);
  for (int a = 0; a < 3; ++a) w.u32(static_cast<std::uint32_t>(grid.spec.dims[a]));
  w.u32(static_cast<std::uint32_t>(grid.class_count));
  for (int a = 0; a < 3; ++a) w.f32(static_cast<float>(grid.spec.voxel_size[a]));
  for (int a = 0; a < 3; ++a) w.f32(static_cast<float>(grid.spec.origin[a]));
  w.bytes(grid.labels.data(), grid.labels.size());
  return w.take();
}

SemanticOccupancyGrid decode_grid_prefix(std::span<const std::uint8_t> bytes, std::size_t& consumed,
                                         std::uint64_t base_offset) {
  ByteReader r(bytes, base_offset);
  r.expect_tag("GOC1", "grid magic");
  const std::uint64_t version_at = r.offset();
  if (r.u32("grid version") != kGridVersion) {
    throw FormatError(version_at, "unsupported grid version");
  }
  SemanticOccupancyGrid grid;
  std::uint64_t voxels = 1;
  for (int a = 0; a < 3; ++a) {
    const std::uint64_t at = r.offset();
    const std::uint32_t d = r.u32("grid dims");
    if (d == 0 || d > (1u << 30)) {
      throw FormatError(at, "grid dimension out of range");
    }
    grid.spec.dims[a] = static_cast<int>(d);
    voxels *= d;
  }
  const std::uint64_t classes_at = r.offset();
  const std::uint32_t classes = r.u32("class count");
  if (classes < 1 || classes > 256) {
    throw FormatError(classes_at, "class count out of range");
  }
  grid.class_count = static_cast<int>(classes);
  for (int a = 0; a < 3; ++a) grid.spec.voxel_size[a] = r.f32("voxel size");
  for (int a = 0; a < 3; ++a) grid.spec.origin[a] = r.f32("origin");
  if (!(grid.spec.voxel_size.array() > 0.0).all() || !grid.spec.origin.allFinite() ||
      !grid.spec.voxel_size.allFinite()) {
    throw FormatError(r.offset() - 24, "non-positive or non-finite voxel geometry");
  }
  if (voxels > r.remaining()) {
    throw FormatError(r.offset(), "truncated label payload: need " + std::to_string(voxels) +
                                      " bytes, have " + std::to_string(r.remaining()));
  }
  const std::uint64_t labels_at = r.offset();
  const auto labels = r.take(static_cast<std::size_t>(voxels), "labels");
  grid.labels.assign(labels.begin(), labels.end());
  for (std::size_t v = 0; v < grid.labels.size(); ++v) {
    if (grid.labels[v] >= classes) {
      throw FormatError(labels_at + v, "label exceeds the class count");
    }
  }
  consumed = static_cast<std::size_t>(r.offset() - base_offset);
  return grid;
}

SemanticOccupancyGrid decode_grid(std::span<const std::uint8_t> bytes) {
  std::size_t consumed = 0;
  auto grid = decode_grid_prefix(bytes, consumed);
  if (consumed != bytes.size()) {
    throw FormatError(consumed, "trailing bytes after the label payload");
  }
  return grid;
}

void emit_grid(const SemanticOccupancyGrid& grid, const std::filesystem::path& path) {
  write_file(path, encode_grid(grid));
}

SemanticOccupancyGrid load_grid(const std::filesystem::path& path) { return decode_grid(read_file(path)); }

}  // namespace gocc::pipeline
