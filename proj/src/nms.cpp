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

#include "fintick/nms.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace fintick {
namespace {

void check_threshold(double iou_threshold) {
  if (!(0.0 <= iou_threshold && iou_threshold <= 1.0)) {
    throw std::invalid_argument("nms: iou_threshold outside [0,1]");
  }
}

std::vector<ScoredDetection> greedy_nms(const std::vector<ScoredDetection>& dets,
                                        double iou_threshold,
                                        bool class_agnostic) {
  check_threshold(iou_threshold);
  std::vector<size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return detection_before(dets[a], dets[b]);
  });

  std::vector<ScoredDetection> kept;
  kept.reserve(dets.size());
  for (size_t idx : order) {
    const ScoredDetection& cand = dets[idx];
    bool keep = true;
    for (const ScoredDetection& k : kept) {
      if (!class_agnostic && k.class_id != cand.class_id) continue;
      if (iou(cand.box, k.box) >= iou_threshold) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(cand);
  }
  return kept;
}

}  // namespace

bool detection_before(const ScoredDetection& a, const ScoredDetection& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.class_id != b.class_id) return a.class_id < b.class_id;
  return std::tuple(a.box.x_min(), a.box.y_min(), a.box.x_max(),
                    a.box.y_max()) < std::tuple(b.box.x_min(), b.box.y_min(),
                                                b.box.x_max(), b.box.y_max());
}

std::vector<ScoredDetection> standard_nms(
    const std::vector<ScoredDetection>& dets, double iou_threshold) {
  return greedy_nms(dets, iou_threshold, /*class_agnostic=*/false);
}

std::vector<ScoredDetection> lucnms(const std::vector<ScoredDetection>& dets,
                                    double iou_threshold) {
  return greedy_nms(dets, iou_threshold, /*class_agnostic=*/true);
}

std::vector<ScoredDetection> brute_force_nms_oracle(
    const std::vector<ScoredDetection>& dets, double iou_threshold,
    bool class_agnostic) {
  check_threshold(iou_threshold);
  std::vector<bool> removed(dets.size(), false);
  std::vector<ScoredDetection> kept;
  kept.reserve(dets.size());
  for (;;) {
    // Next survivor = best remaining candidate by full linear scan.
    int best = -1;
    for (size_t i = 0; i < dets.size(); ++i) {
      if (removed[i]) continue;
      if (best < 0 || detection_before(dets[i], dets[best])) {
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    removed[best] = true;
    kept.push_back(dets[best]);
    for (size_t i = 0; i < dets.size(); ++i) {
      if (removed[i]) continue;
      if (!class_agnostic && dets[i].class_id != dets[best].class_id) continue;
      if (iou(dets[i].box, dets[best].box) >= iou_threshold) {
        removed[i] = true;
      }
    }
  }
  return kept;
}

}  // namespace fintick
