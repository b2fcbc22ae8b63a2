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

#ifndef FINTICK_GEOMETRY_H_
#define FINTICK_GEOMETRY_H_

#include <array>

namespace fintick {

/// Axis-aligned box in continuous pixel coordinates. Origin is the top-left
/// image corner, y grows downward. Zero-area boxes are representable;
/// negative extents are rejected at construction.
class Box {
 public:
  Box() = default;
  Box(double x_min, double y_min, double x_max, double y_max);

  static Box from_center_size(double cx, double cy, double w, double h);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }

  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double center_x() const { return 0.5 * (x_min_ + x_max_); }
  double center_y() const { return 0.5 * (y_min_ + y_max_); }
  double area() const { return width() * height(); }

  Box translated(double dx, double dy) const;
  /// Intersection with [0,w)x[0,h); degenerate when fully outside.
  Box clipped(double w, double h) const;

  bool operator==(const Box& other) const = default;

 private:
  double x_min_ = 0.0;
  double y_min_ = 0.0;
  double x_max_ = 0.0;
  double y_max_ = 0.0;
};

/// Anchor-relative box parameterization: normalized center offsets plus
/// log-space size ratios.
struct RegressionTarget {
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  double th = 0.0;

  bool finite() const;
  bool operator==(const RegressionTarget& other) const = default;
};

double area(const Box& b);
double intersection_area(const Box& a, const Box& b);
double union_area(const Box& a, const Box& b);

/// Intersection over union in [0,1]; 0 for disjoint boxes and 0 when the
/// union has zero area.
double iou(const Box& a, const Box& b);

/// Smallest axis-aligned box containing both inputs.
Box enclosing_box(const Box& a, const Box& b);

/// Squared Euclidean distance between box centers.
double center_distance_sq(const Box& a, const Box& b);

bool contains(const Box& outer, const Box& inner);

/// Box regression encoding. Requires positive anchor and ground-truth sizes;
/// throws std::invalid_argument otherwise.
RegressionTarget encode(const Box& gt, const Box& anchor);

/// Inverse of encode. Requires a positive-size anchor and a finite target;
/// throws std::invalid_argument otherwise.
Box decode(const RegressionTarget& t, const Box& anchor);

}  // namespace fintick

#endif  // FINTICK_GEOMETRY_H_
