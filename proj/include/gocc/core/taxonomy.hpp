#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gocc {

// Semantic classes plus one trailing empty class.
struct ClassTaxonomy {
  std::vector<std::string> names;  // total_count() entries, empty class last
  std::vector<double> class_weights;

  int total_count() const { return static_cast<int>(names.size()); }
  int semantic_count() const { return total_count() - 1; }
  int empty_id() const { return total_count() - 1; }

  void validate() const;

  // 17 semantic classes + "free". Weights are 1.0 except construction_vehicle
  // (1.30) and bicycle (1.27).
  static ClassTaxonomy occupancy_default();

  // `semantic` generic classes named class_0.. plus "free", unit weights.
  static ClassTaxonomy generic(int semantic);

  // One "name weight" pair per line; '#' starts a comment. The last entry is
  // the empty class.
  static ClassTaxonomy parse(std::string_view text);
  std::string to_text() const;
};

}  // namespace gocc
