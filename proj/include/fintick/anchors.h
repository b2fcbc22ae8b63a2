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

#ifndef FINTICK_ANCHORS_H_
#define FINTICK_ANCHORS_H_

#include <vector>

#include "fintick/geometry.h"

namespace fintick {

/// Text-shaped anchor scheme: every (size, ratio) pair yields one anchor per
/// feature cell with width = size and height = size * ratio, so ratios below
/// 1 give the wide, slender boxes typical of printed text lines.
struct AnchorSpec {
  std::vector<double> sizes{32.0, 48.0, 64.0, 80.0};
  std::vector<double> ratios{0.2, 0.5, 0.8, 1.0, 1.2, 1.5};
  int stride = 16;

  int anchors_per_cell() const {
    return static_cast<int>(sizes.size() * ratios.size());
  }
  void validate() const;  // throws std::invalid_argument
};

/// Anchors tiled over a grid_h x grid_w feature grid. Ordering is row-major
/// over cells, then sizes, then ratios; it is part of the contract.
struct AnchorGrid {
  AnchorSpec spec;
  int grid_h = 0;
  int grid_w = 0;
  std::vector<Box> boxes;
};

/// Anchors are centered on cell centers ((col + 0.5) * stride,
/// (row + 0.5) * stride) and are not clipped to any image bound.
AnchorGrid generate_anchors(const AnchorSpec& spec, int grid_h, int grid_w);

enum class AnchorLabel { kNegative, kPositive, kIgnore };

struct AnchorMatch {
  std::vector<AnchorLabel> labels;
  /// Index of the matched ground truth for positive anchors, -1 otherwise.
  std::vector<int> matched_gt;
  /// encode(gt[matched_gt[i]], anchor[i]) for positive anchors; identity
  /// target otherwise.
  std::vector<RegressionTarget> targets;

  int positive_count() const;
};

/// RPN-style assignment: an anchor is positive when its best IoU reaches
/// pos_iou or when it is the argmax anchor of some ground truth (so every
/// ground truth overlapping the grid receives at least one positive);
/// negative below neg_iou; ignored in between. Requires
/// 0 <= neg_iou <= pos_iou <= 1.
AnchorMatch match_anchors(const AnchorGrid& grid, const std::vector<Box>& gt,
                          double pos_iou = 0.7, double neg_iou = 0.3);

}  // namespace fintick

#endif  // FINTICK_ANCHORS_H_
