#include "gocc/pipeline/scene_io.hpp"

#include <cstdio>
#include <sstream>
#include <string>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"
#include "gocc/pipeline/grid_io.hpp"

namespace gocc::pipeline {
namespace {

constexpr std::string_view kEndHeader = "end_header\n";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T read_token(std::istringstream& in, const char* what, std::uint64_t line_offset) {
  T v{};
  if (!(in >> v)) {
    throw FormatError(line_offset, std::string("scene header: cannot read ") + what);
  }
  return v;
}

void write_plane(ByteWriter& w, const lifting::FeaturePlane& p) {
  w.bytes(p.values.data(), p.values.size() * sizeof(float));
}

void read_plane(ByteReader& r, lifting::FeaturePlane& p) {
  const std::size_t n = p.values.size() * sizeof(float);
  r.need(n, "feature plane");
  r.read(p.values.data(), n, "feature plane");
}

}  // namespace

std::vector<std::uint8_t> encode_scene(const SceneFile& file) {
  const auto& s = file.scene;
  file.taxonomy.validate();
  if (file.taxonomy.total_count() != s.truth.class_count) {
    throw Error(ErrorCode::shape, "taxonomy class count does not match the truth grid");
  }
  std::ostringstream h;
  h << "gocc-scene 1\n";
  h << "seed " << s.seed << '\n';
  const GridSpec& g = s.truth.spec;
  h << "grid " << fmt(g.origin.x()) << ' ' << fmt(g.origin.y()) << ' ' << fmt(g.origin.z()) << ' '
    << fmt(g.voxel_size.x()) << ' ' << fmt(g.voxel_size.y()) << ' ' << fmt(g.voxel_size.z()) << ' '
    << g.dims[0] << ' ' << g.dims[1] << ' ' << g.dims[2] << '\n';
  h << "classes " << file.taxonomy.total_count() << '\n';
  for (int c = 0; c < file.taxonomy.total_count(); ++c) {
    h << "class " << file.taxonomy.names[c] << ' ' << fmt(file.taxonomy.class_weights[c]) << '\n';
  }
  h << "blobs " << s.blobs.size() << '\n';
  for (const auto& b : s.blobs) {
    h << "blob";
    for (int a = 0; a < 3; ++a) h << ' ' << fmt(b.center[a]);
    for (int a = 0; a < 3; ++a) h << ' ' << fmt(b.scale[a]);
    h << ' ' << fmt(b.rotation.w()) << ' ' << fmt(b.rotation.x()) << ' ' << fmt(b.rotation.y()) << ' '
      << fmt(b.rotation.z()) << ' ' << b.class_id << '\n';
  }
  const auto& st = s.lidar;
  const int lh = st.planes.empty() ? 0 : st.planes.front().height;
  const int lw = st.planes.empty() ? 0 : st.planes.front().width;
  h << "lidar " << st.planes.size() << ' ' << lh << ' ' << lw << ' ' << st.channels() << ' '
    << fmt(st.xy_origin.x()) << ' ' << fmt(st.xy_origin.y()) << ' ' << fmt(st.cell_size.x()) << ' '
    << fmt(st.cell_size.y()) << '\n';
  h << "z_edges";
  for (double e : st.z_edges) h << ' ' << fmt(e);
  h << '\n';
  h << "cameras " << s.cameras.views.size() << '\n';
  for (const auto& v : s.cameras.views) {
    h << "camera " << v.plane.height << ' ' << v.plane.width << ' ' << v.plane.channels;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) h << ' ' << fmt(v.intrinsics(r, c));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) h << ' ' << fmt(v.extrinsics(r, c));
    h << '\n';
  }
  h << kEndHeader;

  ByteWriter w;
  const std::string text = h.str();
  w.bytes(text.data(), text.size());
  for (const auto& p : st.planes) write_plane(w, p);
  for (const auto& v : s.cameras.views) write_plane(w, v.plane);
  const auto grid = encode_grid(s.truth);
  w.bytes(grid.data(), grid.size());
  return w.take();
}

SceneFile decode_scene(std::span<const std::uint8_t> bytes) {
  const std::string_view all(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const auto end = all.find(kEndHeader);
  if (end == std::string_view::npos) {
    throw FormatError(0, "scene header has no end_header line");
  }
  SceneFile file;
  auto& s = file.scene;
  std::istringstream lines{std::string(all.substr(0, end))};
  std::string line;
  std::uint64_t offset = 0;
  int cameras_expected = -1;
  int blobs_expected = -1;
  int classes_expected = -1;
  int lidar_levels = 0, lidar_h = 0, lidar_w = 0, lidar_c = 0;
  bool saw_magic = false;
  while (std::getline(lines, line)) {
    std::istringstream in(line);
    const std::uint64_t at = offset;
    offset += line.size() + 1;
    std::string key;
    if (!(in >> key)) continue;
    if (!saw_magic) {
      if (key != "gocc-scene" || read_token<int>(in, "version", at) != 1) {
        throw FormatError(at, "not a version 1 scene file");
      }
      saw_magic = true;
    } else if (key == "seed") {
      s.seed = read_token<std::uint64_t>(in, "seed", at);
    } else if (key == "grid") {
      GridSpec g;
      for (int a = 0; a < 3; ++a) g.origin[a] = read_token<double>(in, "grid origin", at);
      for (int a = 0; a < 3; ++a) g.voxel_size[a] = read_token<double>(in, "voxel size", at);
      for (int a = 0; a < 3; ++a) g.dims[a] = read_token<int>(in, "grid dims", at);
      s.config.grid = g;
    } else if (key == "classes") {
      classes_expected = read_token<int>(in, "class count", at);
    } else if (key == "class") {
      file.taxonomy.names.push_back(read_token<std::string>(in, "class name", at));
      file.taxonomy.class_weights.push_back(read_token<double>(in, "class weight", at));
    } else if (key == "blobs") {
      blobs_expected = read_token<int>(in, "blob count", at);
    } else if (key == "blob") {
      harness::Blob b;
      for (int a = 0; a < 3; ++a) b.center[a] = read_token<double>(in, "blob center", at);
      for (int a = 0; a < 3; ++a) b.scale[a] = read_token<double>(in, "blob scale", at);
      const double qw = read_token<double>(in, "blob rotation", at);
      const double qx = read_token<double>(in, "blob rotation", at);
      const double qy = read_token<double>(in, "blob rotation", at);
      const double qz = read_token<double>(in, "blob rotation", at);
      b.rotation = Eigen::Quaterniond(qw, qx, qy, qz);
      b.class_id = read_token<int>(in, "blob class", at);
      s.blobs.push_back(b);
    } else if (key == "lidar") {
      lidar_levels = read_token<int>(in, "lidar levels", at);
      lidar_h = read_token<int>(in, "lidar height", at);
      lidar_w = read_token<int>(in, "lidar width", at);
      lidar_c = read_token<int>(in, "lidar channels", at);
      s.lidar.xy_origin.x() = read_token<double>(in, "lidar origin", at);
      s.lidar.xy_origin.y() = read_token<double>(in, "lidar origin", at);
      s.lidar.cell_size.x() = read_token<double>(in, "lidar cell", at);
      s.lidar.cell_size.y() = read_token<double>(in, "lidar cell", at);
      if (lidar_levels < 0 || lidar_levels > 4096 || lidar_h < 0 || lidar_w < 0 || lidar_c < 0 ||
          static_cast<std::uint64_t>(lidar_h) * lidar_w * lidar_c > (1ull << 32)) {
        throw FormatError(at, "lidar layout out of range");
      }
    } else if (key == "z_edges") {
      double e = 0.0;
      while (in >> e) s.lidar.z_edges.push_back(e);
    } else if (key == "cameras") {
      cameras_expected = read_token<int>(in, "camera count", at);
    } else if (key == "camera") {
      lifting::CameraView v;
      const int ch = read_token<int>(in, "camera height", at);
      const int cw = read_token<int>(in, "camera width", at);
      const int cc = read_token<int>(in, "camera channels", at);
      if (ch < 0 || cw < 0 || cc < 0 || static_cast<std::uint64_t>(ch) * cw * cc > (1ull << 32)) {
        throw FormatError(at, "camera plane size out of range");
      }
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) v.intrinsics(r, c) = read_token<double>(in, "intrinsics", at);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) v.extrinsics(r, c) = read_token<double>(in, "extrinsics", at);
      v.plane = lifting::FeaturePlane(ch, cw, cc);
      s.cameras.views.push_back(std::move(v));
    } else {
      throw FormatError(at, "unknown scene header key '" + key + "'");
    }
  }
  if (!saw_magic) {
    throw FormatError(0, "empty scene header");
  }
  if (classes_expected != file.taxonomy.total_count() || blobs_expected != static_cast<int>(s.blobs.size()) ||
      cameras_expected != static_cast<int>(s.cameras.views.size())) {
    throw FormatError(end, "scene header counts disagree with its records");
  }
  for (int d = 0; d < lidar_levels; ++d) {
    s.lidar.planes.emplace_back(lidar_h, lidar_w, lidar_c);
  }

  const std::size_t body = end + kEndHeader.size();
  ByteReader r(bytes.subspan(body), body);
  for (auto& p : s.lidar.planes) read_plane(r, p);
  for (auto& v : s.cameras.views) read_plane(r, v.plane);
  const std::size_t grid_at = static_cast<std::size_t>(r.offset());
  std::size_t consumed = 0;
  s.truth = decode_grid_prefix(bytes.subspan(grid_at), consumed, grid_at);
  if (grid_at + consumed != bytes.size()) {
    throw FormatError(grid_at + consumed, "trailing bytes after the truth grid");
  }
  s.config.grid = s.truth.spec;
  s.config.semantic_classes = s.truth.class_count - 1;
  s.config.noise_channels = std::max(0, s.lidar.channels() - s.config.semantic_classes);
  s.config.depth_levels = lidar_levels;
  s.config.camera_count = static_cast<int>(s.cameras.views.size());
  if (!s.cameras.views.empty()) {
    s.config.image_height = s.cameras.views.front().plane.height;
    s.config.image_width = s.cameras.views.front().plane.width;
  }
  try {
    file.taxonomy.validate();
    s.lidar.validate();
    s.cameras.validate();
  } catch (const Error& e) {
    throw FormatError(end, std::string("scene content invalid: ") + e.what());
  }
  return file;
}

void save_scene(const SceneFile& file, const std::filesystem::path& path) {
  write_file(path, encode_scene(file));
}

SceneFile load_scene(const std::filesystem::path& path) { return decode_scene(read_file(path)); }

}  // namespace gocc::pipeline
