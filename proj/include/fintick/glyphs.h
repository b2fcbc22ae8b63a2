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

#ifndef FINTICK_GLYPHS_H_
#define FINTICK_GLYPHS_H_

#include <map>
#include <string>
#include <vector>

#include "fintick/image.h"

namespace fintick {

// Fixed monospaced glyph cell. Text is laid out at kGlyphPitch so that
// neighboring cells are separated by at least two blank columns, which the
// character segmenter relies on.
inline constexpr int kGlyphWidth = 12;
inline constexpr int kGlyphHeight = 20;
inline constexpr int kGlyphPitch = 14;

/// One renderable character class: the class id (a single UTF-8 codepoint)
/// and its ink bitmap in a kGlyphWidth x kGlyphHeight cell.
struct GlyphTemplate {
  std::string content;
  RasterImage bitmap;
};

/// Immutable collection of glyph templates addressed by character class.
class GlyphSet {
 public:
  GlyphSet() = default;
  explicit GlyphSet(std::vector<GlyphTemplate> glyphs);

  /// The built-in deterministic font: digits, uppercase Latin letters,
  /// '.', '-', ':', the currency sign, and a 30-glyph stand-in vocabulary
  /// for name fields (codepoints U+4E00..U+4E1D rendered as procedural
  /// patterns, not real typography).
  static GlyphSet builtin();

  int size() const { return static_cast<int>(glyphs_.size()); }
  const GlyphTemplate& at(int i) const { return glyphs_[i]; }
  /// Index of a character class, -1 when absent.
  int find(const std::string& content) const;
  std::vector<std::string> contents() const;

  /// Subset restricted to the given character classes (order preserved);
  /// throws DataMismatchError if any is missing.
  GlyphSet subset(const std::vector<std::string>& wanted) const;

  /// One PGM per glyph, named by character class (alphanumeric classes
  /// literally, others as u<hex codepoint>).
  void save_directory(const std::string& dir) const;
  static GlyphSet load_directory(const std::string& dir);

 private:
  std::vector<GlyphTemplate> glyphs_;
  std::map<std::string, int> index_;
};

/// Named vocabularies used by ticket templates. Known ids: digits, amount,
/// date, alnum, name, full.
std::vector<std::string> vocabulary_contents(const std::string& vocab_id);

/// Splits a UTF-8 string into one string per codepoint.
std::vector<std::string> split_utf8(const std::string& text);

std::string utf8_from_codepoint(uint32_t cp);

/// Renders a glyph sequence as a single text line. Glyph k occupies the
/// cell at x = k * kGlyphPitch. Throws DataMismatchError on unknown glyphs.
RasterImage render_text(const GlyphSet& glyphs,
                        const std::vector<std::string>& seq);

}  // namespace fintick

#endif  // FINTICK_GLYPHS_H_
