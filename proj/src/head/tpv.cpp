#include "gocc/head/tpv.hpp"

#include "gocc/core/dense.hpp"

namespace gocc::head {

std::string_view plane_name(Plane plane) {
  switch (plane) {
    case Plane::xy: return "xy";
    case Plane::xz: return "xz";
    case Plane::yz: return "yz";
  }
  return "xy";
}

Vec2 plane_coordinates(const Vec3& p, Plane plane) {
  switch (plane) {
    case Plane::xy: return {p.x(), p.y()};
    case Plane::xz: return {p.x(), p.z()};
    case Plane::yz: return {p.y(), p.z()};
  }
  return {p.x(), p.y()};
}

TpvProjection tpv_project(const std::vector<Vec3>& centroids,
                          const std::array<PlaneEmbedding, 3>& embeddings, const GridSpec& frame) {
  TpvProjection out;
  const auto n = static_cast<Eigen::Index>(centroids.size());
  const Vec3 lo = frame.box_min();
  const Vec3 extent = frame.extent();
  for (Plane plane : kPlanes) {
    const std::size_t s = plane_slot(plane);
    const Vec2 lo2 = plane_coordinates(lo, plane);
    const Vec2 ext2 = plane_coordinates(extent, plane);
    auto& coords = out.coords[s];
    coords.resize(centroids.size());
    RowMatX normalized(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      coords[i] = plane_coordinates(centroids[i], plane);
      normalized.row(i) = (2.0 * (coords[i] - lo2).cwiseQuotient(ext2)).array() - 1.0;
    }
    const auto& e = embeddings[s];
    RowMatX hidden = linear_rows(normalized, e.fc1_weight, e.fc1_bias);
    relu_inplace(hidden);
    out.features[s] = linear_rows(hidden, e.fc2_weight, e.fc2_bias);
  }
  return out;
}

}  // namespace gocc::head
