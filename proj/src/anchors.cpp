/* Copyright 2026 The Fintick Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fintick/anchors.h"

#include <algorithm>
#include <stdexcept>

namespace fintick {

void AnchorSpec::validate() const {
  if (sizes.empty() || ratios.empty()) {
    throw std::invalid_argument("AnchorSpec: sizes and ratios must be nonempty");
  }
  for (double s : sizes) {
    if (s <= 0.0) throw std::invalid_argument("AnchorSpec: size <= 0");
  }
  for (double r : ratios) {
    if (r <= 0.0) throw std::invalid_argument("AnchorSpec: ratio <= 0");
  }
  if (stride < 1) {
    throw std::invalid_argument("AnchorSpec: stride < 1");
  }
}

AnchorGrid generate_anchors(const AnchorSpec& spec, int grid_h, int grid_w) {
  spec.validate();
  if (grid_h < 1 || grid_w < 1) {
    throw std::invalid_argument("generate_anchors: grid dims must be >= 1");
  }
  AnchorGrid grid;
  grid.spec = spec;
  grid.grid_h = grid_h;
  grid.grid_w = grid_w;
  grid.boxes.reserve(static_cast<size_t>(grid_h) * grid_w *
                     spec.anchors_per_cell());
  for (int row = 0; row < grid_h; ++row) {
    const double cy = (row + 0.5) * spec.stride;
    for (int col = 0; col < grid_w; ++col) {
      const double cx = (col + 0.5) * spec.stride;
      for (double size : spec.sizes) {
        for (double ratio : spec.ratios) {
          grid.boxes.push_back(
              Box::from_center_size(cx, cy, size, size * ratio));
        }
      }
    }
  }
  return grid;
}

int AnchorMatch::positive_count() const {
  return static_cast<int>(
      std::count(labels.begin(), labels.end(), AnchorLabel::kPositive));
}

AnchorMatch match_anchors(const AnchorGrid& grid, const std::vector<Box>& gt,
                          double pos_iou, double neg_iou) {
  if (!(0.0 <= neg_iou && neg_iou <= pos_iou && pos_iou <= 1.0)) {
    throw std::invalid_argument("match_anchors: need 0 <= neg <= pos <= 1");
  }
  const size_t n = grid.boxes.size();
  AnchorMatch match;
  match.labels.assign(n, AnchorLabel::kNegative);
  match.matched_gt.assign(n, -1);
  match.targets.assign(n, RegressionTarget{});
  if (gt.empty()) {
    return match;
  }

  std::vector<double> best_iou(n, 0.0);
  std::vector<int> best_gt(n, -1);
  std::vector<double> gt_best_iou(gt.size(), 0.0);
  std::vector<int> gt_best_anchor(gt.size(), -1);

  for (size_t a = 0; a < n; ++a) {
    for (size_t g = 0; g < gt.size(); ++g) {
      const double v = iou(grid.boxes[a], gt[g]);
      if (v > best_iou[a]) {
        best_iou[a] = v;
        best_gt[a] = static_cast<int>(g);
      }
      if (v > gt_best_iou[g]) {
        gt_best_iou[g] = v;
        gt_best_anchor[g] = static_cast<int>(a);
      }
    }
  }

  for (size_t a = 0; a < n; ++a) {
    if (best_gt[a] >= 0 && best_iou[a] >= pos_iou) {
      match.labels[a] = AnchorLabel::kPositive;
    } else if (best_iou[a] >= neg_iou) {
      match.labels[a] = AnchorLabel::kIgnore;
    }
  }
  // Argmax rule: each ground truth with any overlap forces its best anchor
  // positive, so low-IoU ground truths still receive a proposal.
  for (size_t g = 0; g < gt.size(); ++g) {
    if (gt_best_anchor[g] >= 0 && gt_best_iou[g] > 0.0) {
      match.labels[gt_best_anchor[g]] = AnchorLabel::kPositive;
    }
  }

  for (size_t a = 0; a < n; ++a) {
    if (match.labels[a] == AnchorLabel::kPositive) {
      match.matched_gt[a] = best_gt[a];
      match.targets[a] = encode(gt[best_gt[a]], grid.boxes[a]);
    }
  }
  return match;
}

}  // namespace fintick
