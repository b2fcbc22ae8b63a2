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

#include "fintick/image.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "fintick/errors.h"

namespace fintick {
namespace {

uint8_t to_byte(float v) {
  const float clamped = std::clamp(v, 0.0f, 1.0f);
  return static_cast<uint8_t>(std::lround(clamped * 255.0f));
}

float from_byte(uint8_t v) { return static_cast<float>(v) / 255.0f; }

// Skips PGM whitespace and '#' comment lines.
int next_pgm_token(std::istream& in, std::string& token) {
  token.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      break;
    }
  }
  if (c == EOF) return -1;
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return 0;
}

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

RasterImage::RasterImage(int width, int height, float fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw std::invalid_argument("RasterImage: negative dimension");
  }
  px_.assign(static_cast<size_t>(width) * height, fill);
}

void RasterImage::blit_min(const RasterImage& src, int x0, int y0) {
  for (int y = 0; y < src.height(); ++y) {
    const int dy = y0 + y;
    if (dy < 0 || dy >= height_) continue;
    for (int x = 0; x < src.width(); ++x) {
      const int dx = x0 + x;
      if (dx < 0 || dx >= width_) continue;
      at(dx, dy) = std::min(at(dx, dy), src.at(x, y));
    }
  }
}

RasterImage RasterImage::crop(int x0, int y0, int x1, int y1) const {
  x0 = std::clamp(x0, 0, width_);
  y0 = std::clamp(y0, 0, height_);
  x1 = std::clamp(x1, x0, width_);
  y1 = std::clamp(y1, y0, height_);
  RasterImage out(x1 - x0, y1 - y0);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      out.at(x - x0, y - y0) = at(x, y);
    }
  }
  return out;
}

RasterImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string tok;
  if (next_pgm_token(in, tok) < 0 || tok != "P5") {
    throw IoError(path + ": not a P5 PGM");
  }
  int dims[3];
  for (int& d : dims) {
    if (next_pgm_token(in, tok) < 0) throw IoError(path + ": truncated header");
    try {
      d = std::stoi(tok);
    } catch (const std::exception&) {
      throw IoError(path + ": bad header token '" + tok + "'");
    }
  }
  const int w = dims[0], h = dims[1], maxval = dims[2];
  if (w <= 0 || h <= 0 || maxval != 255) {
    throw IoError(path + ": unsupported PGM geometry/maxval");
  }
  std::vector<uint8_t> raw(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw IoError(path + ": truncated pixel data");
  }
  RasterImage img(w, h);
  for (size_t i = 0; i < raw.size(); ++i) {
    img.pixels()[i] = from_byte(raw[i]);
  }
  return img;
}

void write_pgm(const RasterImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<uint8_t> raw(img.pixels().size());
  for (size_t i = 0; i < raw.size(); ++i) {
    raw[i] = to_byte(img.pixels()[i]);
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("short write to " + path);
}

RasterImage read_png(const std::string& path) {
  std::unique_ptr<FILE, FileCloser> fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path);

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path + ": PNG decode error");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if ((png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) != 0) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  std::vector<uint8_t> raw(static_cast<size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    rows[y] = raw.data() + static_cast<size_t>(y) * w;
  }
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  RasterImage img(w, h);
  for (size_t i = 0; i < raw.size(); ++i) {
    img.pixels()[i] = from_byte(raw[i]);
  }
  return img;
}

void write_png(const RasterImage& img, const std::string& path) {
  std::unique_ptr<FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path);

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path + ": PNG encode error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<uint8_t> raw(img.pixels().size());
  for (size_t i = 0; i < raw.size(); ++i) {
    raw[i] = to_byte(img.pixels()[i]);
  }
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y) {
    rows[y] = raw.data() + static_cast<size_t>(y) * img.width();
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

RasterImage read_image(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) {
    return read_png(path);
  }
  return read_pgm(path);
}

InkIntegral::InkIntegral(const RasterImage& img, float ink_threshold)
    : width_(img.width()), height_(img.height()) {
  sums_.assign(static_cast<size_t>(width_ + 1) * (height_ + 1), 0);
  for (int y = 0; y < height_; ++y) {
    int64_t row = 0;
    for (int x = 0; x < width_; ++x) {
      row += img.at(x, y) <= ink_threshold ? 1 : 0;
      sums_[static_cast<size_t>(y + 1) * (width_ + 1) + (x + 1)] =
          sums_[static_cast<size_t>(y) * (width_ + 1) + (x + 1)] + row;
    }
  }
}

int64_t InkIntegral::count(int x0, int y0, int x1, int y1) const {
  x0 = std::clamp(x0, 0, width_);
  y0 = std::clamp(y0, 0, height_);
  x1 = std::clamp(x1, x0, width_);
  y1 = std::clamp(y1, y0, height_);
  const auto s = [&](int x, int y) {
    return sums_[static_cast<size_t>(y) * (width_ + 1) + x];
  };
  return s(x1, y1) - s(x0, y1) - s(x1, y0) + s(x0, y0);
}

int64_t InkIntegral::count(const Box& box) const {
  return count(static_cast<int>(std::floor(box.x_min())),
               static_cast<int>(std::floor(box.y_min())),
               static_cast<int>(std::ceil(box.x_max())),
               static_cast<int>(std::ceil(box.y_max())));
}

}  // namespace fintick
