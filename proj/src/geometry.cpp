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

#include "fintick/geometry.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fintick {

Box::Box(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (x_max < x_min || y_max < y_min) {
    throw std::invalid_argument("Box: negative extent");
  }
  if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_max)) {
    throw std::invalid_argument("Box: non-finite coordinate");
  }
}

Box Box::from_center_size(double cx, double cy, double w, double h) {
  if (w < 0.0 || h < 0.0) {
    throw std::invalid_argument("Box: negative size");
  }
  return Box(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h);
}

Box Box::translated(double dx, double dy) const {
  return Box(x_min_ + dx, y_min_ + dy, x_max_ + dx, y_max_ + dy);
}

Box Box::clipped(double w, double h) const {
  const double x0 = std::clamp(x_min_, 0.0, w);
  const double y0 = std::clamp(y_min_, 0.0, h);
  const double x1 = std::clamp(x_max_, x0, w);
  const double y1 = std::clamp(y_max_, y0, h);
  return Box(x0, y0, x1, y1);
}

bool RegressionTarget::finite() const {
  return std::isfinite(tx) && std::isfinite(ty) && std::isfinite(tw) &&
         std::isfinite(th);
}

double area(const Box& b) { return b.area(); }

double intersection_area(const Box& a, const Box& b) {
  const double iw =
      std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double ih =
      std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (iw <= 0.0 || ih <= 0.0) {
    return 0.0;
  }
  return iw * ih;
}

double union_area(const Box& a, const Box& b) {
  return a.area() + b.area() - intersection_area(a, b);
}

double iou(const Box& a, const Box& b) {
  const double u = union_area(a, b);
  if (u <= 0.0) {
    return 0.0;
  }
  return intersection_area(a, b) / u;
}

Box enclosing_box(const Box& a, const Box& b) {
  return Box(std::min(a.x_min(), b.x_min()), std::min(a.y_min(), b.y_min()),
             std::max(a.x_max(), b.x_max()), std::max(a.y_max(), b.y_max()));
}

double center_distance_sq(const Box& a, const Box& b) {
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  return dx * dx + dy * dy;
}

bool contains(const Box& outer, const Box& inner) {
  return outer.x_min() <= inner.x_min() && outer.y_min() <= inner.y_min() &&
         outer.x_max() >= inner.x_max() && outer.y_max() >= inner.y_max();
}

RegressionTarget encode(const Box& gt, const Box& anchor) {
  if (anchor.width() <= 0.0 || anchor.height() <= 0.0) {
    throw std::invalid_argument("encode: degenerate anchor");
  }
  if (gt.width() <= 0.0 || gt.height() <= 0.0) {
    throw std::invalid_argument("encode: degenerate ground truth");
  }
  RegressionTarget t;
  t.tx = (gt.center_x() - anchor.center_x()) / anchor.width();
  t.ty = (gt.center_y() - anchor.center_y()) / anchor.height();
  t.tw = std::log(gt.width() / anchor.width());
  t.th = std::log(gt.height() / anchor.height());
  return t;
}

Box decode(const RegressionTarget& t, const Box& anchor) {
  if (anchor.width() <= 0.0 || anchor.height() <= 0.0) {
    throw std::invalid_argument("decode: degenerate anchor");
  }
  if (!t.finite()) {
    throw std::invalid_argument("decode: non-finite target");
  }
  const double cx = anchor.center_x() + t.tx * anchor.width();
  const double cy = anchor.center_y() + t.ty * anchor.height();
  const double w = anchor.width() * std::exp(t.tw);
  const double h = anchor.height() * std::exp(t.th);
  return Box::from_center_size(cx, cy, w, h);
}

}  // namespace fintick
