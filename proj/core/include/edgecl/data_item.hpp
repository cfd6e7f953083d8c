#pragma once

#include <cstddef>
#include <vector>

namespace edgecl {

// One synthetic detected object. `label` is the ground truth; the simulated
// golden teacher copies it when an item is selected for training.
struct DataItem {
  std::vector<double> features;
  std::size_t label = 0;
  double arrival_time = 0.0;
  std::size_t scene_id = 0;
  std::size_t index = 0;  // position in the generated stream
};

}  // namespace edgecl
