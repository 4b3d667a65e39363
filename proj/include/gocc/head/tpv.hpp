#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "gocc/core/grid.hpp"
#include "gocc/core/math.hpp"

namespace gocc::head {

enum class Plane { xy, xz, yz };
inline constexpr std::array<Plane, 3> kPlanes{Plane::xy, Plane::xz, Plane::yz};

std::string_view plane_name(Plane plane);
inline std::size_t plane_slot(Plane plane) { return static_cast<std::size_t>(plane); }

// (x, y), (x, z) or (y, z).
Vec2 plane_coordinates(const Vec3& point, Plane plane);

// Phi_p: 2 -> F (ReLU) -> F.
struct PlaneEmbedding {
  MatX fc1_weight;  // F x 2
  VecX fc1_bias;
  MatX fc2_weight;  // F x F
  VecX fc2_bias;
};

struct TpvProjection {
  std::array<std::vector<Vec2>, 3> coords;  // exact plane coordinates per anchor
  std::array<RowMatX, 3> features;          // Phi_p of the box-normalized coordinates
};

// The embedding input is the plane coordinate mapped to [-1, 1] across the
// grid box (`frame`), which keeps Phi_p well scaled at any grid size.
TpvProjection tpv_project(const std::vector<Vec3>& centroids,
                          const std::array<PlaneEmbedding, 3>& embeddings, const GridSpec& frame);

}  // namespace gocc::head
