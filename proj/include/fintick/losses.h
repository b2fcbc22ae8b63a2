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

#ifndef FINTICK_LOSSES_H_
#define FINTICK_LOSSES_H_

#include <array>

#include "fintick/geometry.h"

namespace fintick {

enum class LossKind { kSmoothL1, kIoU, kGIoU, kCIoU };

/// Aspect-ratio penalty form for the CIoU loss.
///
/// kSquared is the standard definition, v = (4/pi^2) * (atan(wg/hg) -
/// atan(w/h))^2, which is nonnegative and is what every operation here uses
/// by default. kLinear is the alternative v = (4/pi) * (atan(wg/hg) -
/// atan(w/h)); it can go negative and is exposed only so the two forms can
/// be compared numerically.
enum class CiouAspectForm { kSquared, kLinear };

/// A loss value with its gradient. For the box losses the gradient is
/// d(loss)/d([x_min, y_min, x_max, y_max]) of the predicted box; for
/// smooth_l1_loss it is d(loss)/d([tx, ty, tw, th]) of the first argument.
struct LossEval {
  double value = 0.0;
  std::array<double, 4> gradient{0.0, 0.0, 0.0, 0.0};
};

/// The individual terms of the CIoU loss:
///   loss = 1 - iou + center_penalty + alpha * v
/// center_penalty is the squared center distance over the squared enclosing
/// diagonal and always lies in [0, 1). v is the aspect-ratio consistency
/// term; alpha = v / ((1 - iou) + v) is its trade-off weight, treated as a
/// constant during differentiation.
struct CiouTerms {
  double iou = 0.0;
  double center_penalty = 0.0;
  double v = 0.0;
  double alpha = 0.0;
};

/// Elementwise smooth L1 over the four target components:
/// 0.5*d^2 for |d| < 1, |d| - 0.5 otherwise, summed.
LossEval smooth_l1_loss(const RegressionTarget& t,
                        const RegressionTarget& t_star);

/// 1 - IoU(pred, gt). The gradient is zero on the disjoint plateau, which is
/// the limitation that motivates the GIoU/CIoU variants.
LossEval iou_loss(const Box& pred, const Box& gt);

/// 1 - GIoU(pred, gt) where GIoU = IoU - (|C| - |union|)/|C| and C is the
/// smallest enclosing box. Value lies in [0, 2).
LossEval giou_loss(const Box& pred, const Box& gt);

/// CIoU loss with analytic gradient. Requires positive-area pred and gt;
/// throws std::invalid_argument otherwise. If terms_out is non-null the
/// individual loss terms are written to it.
LossEval ciou_loss(const Box& pred, const Box& gt,
                   CiouTerms* terms_out = nullptr,
                   CiouAspectForm form = CiouAspectForm::kSquared);

/// Loss value only, dispatched by kind (box losses only).
double loss_value(LossKind kind, const Box& pred, const Box& gt);

/// Central-difference gradient of the named box loss with respect to the
/// predicted corners. For kCIoU the alpha weight is held fixed at its value
/// for the unperturbed pair, matching the convention used by the analytic
/// gradient. Requires epsilon > 0.
std::array<double, 4> finite_difference_gradient(LossKind kind,
                                                 const Box& pred,
                                                 const Box& gt,
                                                 double epsilon);

/// Central-difference gradient of smooth_l1_loss with respect to t.
std::array<double, 4> finite_difference_smooth_l1(
    const RegressionTarget& t, const RegressionTarget& t_star, double epsilon);

/// Max-norm difference between two gradients, relative to the larger of the
/// two magnitudes with an absolute floor of 1.
double gradient_relative_error(const std::array<double, 4>& a,
                               const std::array<double, 4>& b);

/// True when any predicted corner coordinate is within `margin` of a
/// same-axis ground-truth corner coordinate. Such configurations sit on the
/// min/max kinks of the IoU family where only a subgradient exists.
bool near_corner_alignment(const Box& pred, const Box& gt, double margin);

}  // namespace fintick

#endif  // FINTICK_LOSSES_H_
