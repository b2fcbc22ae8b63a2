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

#ifndef FINTICK_IMAGE_H_
#define FINTICK_IMAGE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fintick/geometry.h"

namespace fintick {

/// Row-major grayscale raster with intensities in [0,1]; 0 is ink, 1 is
/// paper.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, float fill = 1.0f);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  float at(int x, int y) const { return px_[static_cast<size_t>(y) * width_ + x]; }
  float& at(int x, int y) { return px_[static_cast<size_t>(y) * width_ + x]; }

  const std::vector<float>& pixels() const { return px_; }
  std::vector<float>& pixels() { return px_; }

  /// Darkens dst pixels with src (ink accumulates as min); src pixels
  /// falling outside the canvas are dropped.
  void blit_min(const RasterImage& src, int x0, int y0);

  /// Crop to the integer rectangle [x0,x1) x [y0,y1) clamped to bounds.
  RasterImage crop(int x0, int y0, int x1, int y1) const;

  bool operator==(const RasterImage& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> px_;
};

/// 8-bit binary PGM (P5). Throws IoError on failure.
RasterImage read_pgm(const std::string& path);
void write_pgm(const RasterImage& img, const std::string& path);

/// 8-bit grayscale PNG; color inputs are converted to gray on read.
RasterImage read_png(const std::string& path);
void write_png(const RasterImage& img, const std::string& path);

RasterImage read_image(const std::string& path);  // dispatch by extension

/// Summed-area table of the ink mask (intensity <= ink_threshold), for O(1)
/// ink counts over rectangles.
class InkIntegral {
 public:
  InkIntegral() = default;
  explicit InkIntegral(const RasterImage& img, float ink_threshold = 0.5f);

  /// Number of ink pixels with x in [x0,x1), y in [y0,y1); the rectangle is
  /// clamped to the image.
  int64_t count(int x0, int y0, int x1, int y1) const;
  int64_t count(const Box& box) const;

  int width() const { return width_; }
  int height() const { return height_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<int64_t> sums_;  // (width+1) x (height+1)
};

}  // namespace fintick

#endif  // FINTICK_IMAGE_H_
