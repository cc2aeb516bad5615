#pragma once

#include <array>
#include <vector>

#include "euro/types.hpp"

namespace euro {

// Binary regression tree over the 8-dimensional feature-difference space,
// stored as a flat node array.  feature < 0 marks a leaf.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(const std::array<double, kNumFeatures>& x) const {
    int i = 0;
    while (nodes[i].feature >= 0) {
      i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    }
    return nodes[i].value;
  }

  bool empty() const { return nodes.empty(); }
};

}  // namespace euro
