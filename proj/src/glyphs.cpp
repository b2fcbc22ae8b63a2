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

#include "fintick/glyphs.h"

#include <algorithm>
#include <bitset>
#include <filesystem>
#include <random>
#include <sstream>

#include "fintick/errors.h"

namespace fs = std::filesystem;

namespace fintick {
namespace {

// 5x7 dot-matrix patterns, one row per byte, MSB-first in the low 5 bits.
// Scaled x2 into the 12x20 cell at offset (1,3). Shapes are chosen so no
// two patterns are identical ('0' carries the slash that distinguishes it
// from 'O', '1' and 'I' differ in serifs, and so on).
struct DotGlyph {
  uint32_t codepoint;
  uint8_t rows[7];
};

constexpr DotGlyph kFont[] = {
    {'0', {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110}},
    {'1', {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'2', {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111}},
    {'3', {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110}},
    {'4', {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010}},
    {'5', {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110}},
    {'6', {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110}},
    {'7', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000}},
    {'8', {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110}},
    {'9', {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100}},
    {'A', {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'B', {0b11110, 0b10001, 0b10001, 0b11110, 0b10001, 0b10001, 0b11110}},
    {'C', {0b01110, 0b10001, 0b10000, 0b10000, 0b10000, 0b10001, 0b01110}},
    {'D', {0b11100, 0b10010, 0b10001, 0b10001, 0b10001, 0b10010, 0b11100}},
    {'E', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111}},
    {'F', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'G', {0b01110, 0b10001, 0b10000, 0b10111, 0b10001, 0b10001, 0b01111}},
    {'H', {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'I', {0b01110, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110}},
    {'J', {0b00111, 0b00010, 0b00010, 0b00010, 0b00010, 0b10010, 0b01100}},
    {'K', {0b10001, 0b10010, 0b10100, 0b11000, 0b10100, 0b10010, 0b10001}},
    {'L', {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111}},
    {'M', {0b10001, 0b11011, 0b10101, 0b10101, 0b10001, 0b10001, 0b10001}},
    {'N', {0b10001, 0b10001, 0b11001, 0b10101, 0b10011, 0b10001, 0b10001}},
    {'O', {0b01110, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'P', {0b11110, 0b10001, 0b10001, 0b11110, 0b10000, 0b10000, 0b10000}},
    {'Q', {0b01110, 0b10001, 0b10001, 0b10001, 0b10101, 0b10010, 0b01101}},
    {'R', {0b11110, 0b10001, 0b10001, 0b11110, 0b10100, 0b10010, 0b10001}},
    {'S', {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110}},
    {'T', {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'U', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01110}},
    {'V', {0b10001, 0b10001, 0b10001, 0b10001, 0b10001, 0b01010, 0b00100}},
    {'W', {0b10001, 0b10001, 0b10001, 0b10101, 0b10101, 0b10101, 0b01010}},
    {'X', {0b10001, 0b10001, 0b01010, 0b00100, 0b01010, 0b10001, 0b10001}},
    {'Y', {0b10001, 0b10001, 0b01010, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'Z', {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b10000, 0b11111}},
    {'.', {0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b01100, 0b01100}},
    {'-', {0b00000, 0b00000, 0b00000, 0b01110, 0b00000, 0b00000, 0b00000}},
    {':', {0b00000, 0b01100, 0b01100, 0b00000, 0b01100, 0b01100, 0b00000}},
    {0xA5, {0b10001, 0b01010, 0b00100, 0b11111, 0b00100, 0b11111, 0b00100}},
};

constexpr int kNameGlyphCount = 30;
constexpr uint32_t kNameGlyphBase = 0x4E00;

RasterImage rasterize_5x7(const uint8_t rows[7]) {
  RasterImage cell(kGlyphWidth, kGlyphHeight, 1.0f);
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 5; ++c) {
      if ((rows[r] >> (4 - c)) & 1) {
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            cell.at(1 + 2 * c + dx, 3 + 2 * r + dy) = 0.0f;
          }
        }
      }
    }
  }
  return cell;
}

std::bitset<35> pattern_bits(const uint8_t rows[7]) {
  std::bitset<35> bits;
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 5; ++c) {
      bits[r * 5 + c] = (rows[r] >> (4 - c)) & 1;
    }
  }
  return bits;
}

// Stand-in patterns for the large name vocabulary: rejection-sampled 5x7
// masks, far apart in Hamming distance from each other and from the base
// font. Fixed internal seed; independent of any user seed.
std::vector<DotGlyph> make_name_glyphs() {
  std::vector<std::bitset<35>> taken;
  for (const DotGlyph& g : kFont) {
    taken.push_back(pattern_bits(g.rows));
  }
  std::mt19937 rng(0xF1C8u);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<DotGlyph> out;
  while (out.size() < kNameGlyphCount) {
    DotGlyph g{};
    g.codepoint = kNameGlyphBase + static_cast<uint32_t>(out.size());
    std::bitset<35> bits;
    for (int r = 0; r < 7; ++r) {
      for (int c = 0; c < 5; ++c) {
        if (bit(rng)) {
          g.rows[r] |= static_cast<uint8_t>(1 << (4 - c));
          bits[r * 5 + c] = true;
        }
      }
    }
    const size_t ink = bits.count();
    if (ink < 12 || ink > 24) continue;
    bool distinct = true;
    for (const auto& t : taken) {
      if ((bits ^ t).count() < 10) {
        distinct = false;
        break;
      }
    }
    if (!distinct) continue;
    taken.push_back(bits);
    out.push_back(g);
  }
  return out;
}

bool is_plain_alnum(const std::string& content) {
  return content.size() == 1 &&
         (std::isdigit(static_cast<unsigned char>(content[0])) ||
          std::isupper(static_cast<unsigned char>(content[0])));
}

uint32_t utf8_first_codepoint(const std::string& s) {
  if (s.empty()) throw DataMismatchError("empty character class");
  const auto b0 = static_cast<unsigned char>(s[0]);
  if (b0 < 0x80) return b0;
  int extra = 0;
  uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    cp = b0 & 0x1F;
    extra = 1;
  } else if ((b0 & 0xF0) == 0xE0) {
    cp = b0 & 0x0F;
    extra = 2;
  } else if ((b0 & 0xF8) == 0xF0) {
    cp = b0 & 0x07;
    extra = 3;
  } else {
    throw DataMismatchError("invalid UTF-8 in character class");
  }
  if (s.size() < static_cast<size_t>(1 + extra)) {
    throw DataMismatchError("truncated UTF-8 in character class");
  }
  for (int i = 1; i <= extra; ++i) {
    cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
  }
  return cp;
}

std::string glyph_file_stem(const std::string& content) {
  if (is_plain_alnum(content)) return content;
  std::ostringstream os;
  os << "u" << std::hex << std::uppercase << utf8_first_codepoint(content);
  return os.str();
}

std::string content_from_file_stem(const std::string& stem) {
  if (stem.size() > 1 && (stem[0] == 'u' || stem[0] == 'U')) {
    uint32_t cp = 0;
    std::istringstream is(stem.substr(1));
    is >> std::hex >> cp;
    if (is && cp != 0) return utf8_from_codepoint(cp);
  }
  return stem;
}

}  // namespace

GlyphSet::GlyphSet(std::vector<GlyphTemplate> glyphs)
    : glyphs_(std::move(glyphs)) {
  for (int i = 0; i < static_cast<int>(glyphs_.size()); ++i) {
    if (glyphs_[i].bitmap.width() != kGlyphWidth ||
        glyphs_[i].bitmap.height() != kGlyphHeight) {
      throw DataMismatchError("glyph '" + glyphs_[i].content +
                              "' has wrong cell size");
    }
    if (!index_.emplace(glyphs_[i].content, i).second) {
      throw DataMismatchError("duplicate glyph class '" + glyphs_[i].content +
                              "'");
    }
  }
}

GlyphSet GlyphSet::builtin() {
  std::vector<GlyphTemplate> glyphs;
  for (const DotGlyph& g : kFont) {
    glyphs.push_back({utf8_from_codepoint(g.codepoint), rasterize_5x7(g.rows)});
  }
  for (const DotGlyph& g : make_name_glyphs()) {
    glyphs.push_back({utf8_from_codepoint(g.codepoint), rasterize_5x7(g.rows)});
  }
  return GlyphSet(std::move(glyphs));
}

int GlyphSet::find(const std::string& content) const {
  const auto it = index_.find(content);
  return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> GlyphSet::contents() const {
  std::vector<std::string> out;
  out.reserve(glyphs_.size());
  for (const GlyphTemplate& g : glyphs_) {
    out.push_back(g.content);
  }
  return out;
}

GlyphSet GlyphSet::subset(const std::vector<std::string>& wanted) const {
  std::vector<GlyphTemplate> picked;
  picked.reserve(wanted.size());
  for (const std::string& c : wanted) {
    const int i = find(c);
    if (i < 0) throw DataMismatchError("glyph class '" + c + "' not available");
    picked.push_back(glyphs_[i]);
  }
  return GlyphSet(std::move(picked));
}

void GlyphSet::save_directory(const std::string& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  for (const GlyphTemplate& g : glyphs_) {
    write_pgm(g.bitmap, (fs::path(dir) / (glyph_file_stem(g.content) + ".pgm"))
                            .string());
  }
}

GlyphSet GlyphSet::load_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw IoError("glyph directory not found: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<GlyphTemplate> glyphs;
  for (const fs::path& p : files) {
    glyphs.push_back(
        {content_from_file_stem(p.stem().string()), read_pgm(p.string())});
  }
  if (glyphs.empty()) throw IoError("no glyph bitmaps in " + dir);
  return GlyphSet(std::move(glyphs));
}

std::vector<std::string> vocabulary_contents(const std::string& vocab_id) {
  std::vector<std::string> out;
  const auto push_range = [&out](char lo, char hi) {
    for (char c = lo; c <= hi; ++c) out.emplace_back(1, c);
  };
  if (vocab_id == "digits") {
    push_range('0', '9');
  } else if (vocab_id == "amount") {
    push_range('0', '9');
    out.push_back(".");
    out.push_back(utf8_from_codepoint(0xA5));
  } else if (vocab_id == "date") {
    push_range('0', '9');
    out.push_back("-");
  } else if (vocab_id == "alnum") {
    push_range('0', '9');
    push_range('A', 'Z');
  } else if (vocab_id == "name") {
    for (int i = 0; i < kNameGlyphCount; ++i) {
      out.push_back(utf8_from_codepoint(kNameGlyphBase + i));
    }
  } else if (vocab_id == "full") {
    for (const DotGlyph& g : kFont) {
      out.push_back(utf8_from_codepoint(g.codepoint));
    }
    for (int i = 0; i < kNameGlyphCount; ++i) {
      out.push_back(utf8_from_codepoint(kNameGlyphBase + i));
    }
  } else {
    throw ConfigError("unknown vocabulary id '" + vocab_id + "'");
  }
  return out;
}

std::vector<std::string> split_utf8(const std::string& text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    const auto b = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if ((b & 0xE0) == 0xC0) {
      len = 2;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
    }
    if (i + len > text.size()) {
      throw DataMismatchError("truncated UTF-8 sequence");
    }
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::string utf8_from_codepoint(uint32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

RasterImage render_text(const GlyphSet& glyphs,
                        const std::vector<std::string>& seq) {
  const int n = static_cast<int>(seq.size());
  const int width = n == 0 ? 0 : (n - 1) * kGlyphPitch + kGlyphWidth;
  RasterImage line(width, n == 0 ? 0 : kGlyphHeight, 1.0f);
  for (int k = 0; k < n; ++k) {
    const int i = glyphs.find(seq[k]);
    if (i < 0) {
      throw DataMismatchError("cannot render unknown glyph '" + seq[k] + "'");
    }
    line.blit_min(glyphs.at(i).bitmap, k * kGlyphPitch, 0);
  }
  return line;
}

}  // namespace fintick
