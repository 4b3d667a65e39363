#include "gocc/head/raster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "gocc/core/error.hpp"

namespace gocc::head {

std::vector<std::size_t> RasterOrder::inverse() const {
  std::vector<std::size_t> inv(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    inv[order[k]] = k;
  }
  return inv;
}

RasterOrder raster_serialize(const std::vector<Vec2>& coords, double omega) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : coords) {
    lo = std::min(lo, c.x());
    hi = std::max(hi, c.x());
  }
  const double spread = coords.empty() ? 0.0 : hi - lo;
  if (!(omega > spread)) {
    std::ostringstream msg;
    msg << "raster key scale " << omega << " does not exceed secondary spread " << spread;
    throw Error(ErrorCode::configuration, msg.str());
  }
  std::vector<double> keys(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    keys[i] = coords[i].y() * omega + coords[i].x();
  }
  RasterOrder out;
  out.omega = omega;
  out.order.resize(coords.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    if (coords[a].y() != coords[b].y()) return coords[a].y() < coords[b].y();
    if (coords[a].x() != coords[b].x()) return coords[a].x() < coords[b].x();
    return a < b;
  });
  return out;
}

RowMatX gather_rows(const RowMatX& rows, const std::vector<std::size_t>& order) {
  RowMatX out(static_cast<Eigen::Index>(order.size()), rows.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = rows.row(static_cast<Eigen::Index>(order[k]));
  }
  return out;
}

RowMatX scatter_rows(const RowMatX& sorted, const std::vector<std::size_t>& order) {
  RowMatX out(sorted.rows(), sorted.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.row(static_cast<Eigen::Index>(order[k])) = sorted.row(static_cast<Eigen::Index>(k));
  }
  return out;
}

}  // namespace gocc::head
