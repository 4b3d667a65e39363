#pragma once

#include <cstddef>
#include <vector>

#include "gocc/core/math.hpp"

namespace gocc::head {

// Each coordinate pair is (secondary, primary): x then y on the xy plane, and
// the second axis (z) is primary on xz and yz. Sort key = primary * omega +
// secondary, ascending. Equal keys fall back to primary, then secondary, then
// the original index, so the order is a function of the coordinates alone
// whenever they are distinct.
struct RasterOrder {
  std::vector<std::size_t> order;  // order[k] = anchor at sequence position k
  double omega = 0.0;

  std::vector<std::size_t> inverse() const;
};

// Throws a configuration error unless omega exceeds the secondary spread.
RasterOrder raster_serialize(const std::vector<Vec2>& coords, double omega);

RowMatX gather_rows(const RowMatX& rows, const std::vector<std::size_t>& order);
// Inverse of gather_rows: out.row(order[k]) = sorted.row(k).
RowMatX scatter_rows(const RowMatX& sorted, const std::vector<std::size_t>& order);

}  // namespace gocc::head
