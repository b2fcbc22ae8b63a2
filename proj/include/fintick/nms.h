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

#ifndef FINTICK_NMS_H_
#define FINTICK_NMS_H_

#include <vector>

#include "fintick/geometry.h"

namespace fintick {

struct ScoredDetection {
  Box box;
  int class_id = 0;
  double score = 0.0;

  bool operator==(const ScoredDetection& other) const = default;
};

/// Processing/output order: score descending, then class_id ascending, then
/// box corners lexicographically. Shared by both NMS routes so their outputs
/// are comparable as ordered lists.
bool detection_before(const ScoredDetection& a, const ScoredDetection& b);

/// Greedy per-class suppression: a detection is kept iff its IoU with every
/// already-kept detection of the same class is below iou_threshold. Kept
/// detections are returned unmodified, ordered by detection_before.
std::vector<ScoredDetection> standard_nms(
    const std::vector<ScoredDetection>& dets, double iou_threshold);

/// Location-unique suppression: identical to standard_nms except that
/// suppression ignores classes, so at most one detection survives per
/// location no matter how many classes proposed it.
std::vector<ScoredDetection> lucnms(const std::vector<ScoredDetection>& dets,
                                    double iou_threshold);

/// Quadratic reference with the same contract as standard_nms
/// (class_agnostic = false) or lucnms (class_agnostic = true). Selects each
/// survivor by linear scan instead of sorting; used for equivalence testing.
std::vector<ScoredDetection> brute_force_nms_oracle(
    const std::vector<ScoredDetection>& dets, double iou_threshold,
    bool class_agnostic);

}  // namespace fintick

#endif  // FINTICK_NMS_H_
