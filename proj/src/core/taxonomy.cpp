#include "gocc/core/taxonomy.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "gocc/core/error.hpp"

namespace gocc {

void ClassTaxonomy::validate() const {
  if (names.size() < 2 || names.size() > 256) {
    throw Error(ErrorCode::configuration, "taxonomy needs between 2 and 256 classes");
  }
  if (class_weights.size() != names.size()) {
    throw Error(ErrorCode::configuration, "one class weight per class required");
  }
  for (const double w : class_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::configuration, "class weights must be positive");
    }
  }
}

ClassTaxonomy ClassTaxonomy::occupancy_default() {
  ClassTaxonomy t;
  t.names = {"others",       "barrier",          "bicycle",    "bus",
             "car",          "construction_vehicle", "motorcycle", "pedestrian",
             "traffic_cone", "trailer",          "truck",      "driveable_surface",
             "other_flat",   "sidewalk",         "terrain",    "manmade",
             "vegetation",   "free"};
  t.class_weights.assign(t.names.size(), 1.0);
  t.class_weights[2] = 1.27;
  t.class_weights[5] = 1.30;
  return t;
}

ClassTaxonomy ClassTaxonomy::generic(int semantic) {
  ClassTaxonomy t;
  for (int c = 0; c < semantic; ++c) {
    t.names.push_back("class_" + std::to_string(c));
  }
  t.names.emplace_back("free");
  t.class_weights.assign(t.names.size(), 1.0);
  t.validate();
  return t;
}

ClassTaxonomy ClassTaxonomy::parse(std::string_view text) {
  ClassTaxonomy t;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string name;
    if (!(fields >> name)) {
      continue;
    }
    double weight = 1.0;
    if (!(fields >> weight)) {
      throw Error(ErrorCode::configuration,
                  "taxonomy line " + std::to_string(line_no) + " lacks a weight");
    }
    t.names.push_back(name);
    t.class_weights.push_back(weight);
  }
  t.validate();
  return t;
}

std::string ClassTaxonomy::to_text() const {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t c = 0; c < names.size(); ++c) {
    out << names[c] << ' ' << class_weights[c] << '\n';
  }
  return out.str();
}

}  // namespace gocc
