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

#ifndef FINTICK_DETECTOR_H_
#define FINTICK_DETECTOR_H_

#include <functional>
#include <vector>

#include "fintick/anchors.h"
#include "fintick/glyphs.h"
#include "fintick/image.h"
#include "fintick/nms.h"
#include "fintick/template_registry.h"
#include "fintick/ticket.h"

namespace fintick {

/// Per-stage detection policy. Character stages suppress class-agnostically
/// (location-unique) by default; region stages per class.
struct DetectorStage {
  enum class Kind { kRegion, kCharacter };
  enum class NmsPolicy { kStandard, kLucnms };

  Kind kind = Kind::kCharacter;
  double score_threshold = 0.7;
  NmsPolicy nms_policy = NmsPolicy::kLucnms;
  double nms_iou = 0.5;

  static DetectorStage region_defaults();
  static DetectorStage character_defaults();
};

/// All detector knobs in one place.
struct DetectorConfig {
  double region_threshold = 0.6;
  double char_threshold = 0.7;
  double recognition_threshold = 0.7;
  double proposal_threshold = 0.05;
  double standard_nms_iou = 0.5;
  double lucnms_iou = 0.5;
  double proposal_nms_iou = 0.3;
  int search_radius = 12;  // label search window around the nominal position
  AnchorSpec anchor_spec;

  DetectorStage region_stage() const;
  DetectorStage char_stage() const;
  void validate() const;  // throws ConfigError
};

/// Half-open integer pixel rectangle.
struct IntRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  Box to_box() const { return Box(x0, y0, x1, y1); }
};

/// Splits the ink inside `within` into character-sized cells: maximal ink
/// row bands, then maximal ink column runs inside each band, in reading
/// order. Rectangles are tight ink bounding boxes.
std::vector<IntRect> segment_ink_cells(const RasterImage& img,
                                       const IntRect& within,
                                       float ink_threshold = 0.5f);

/// Fixed-form region detection: each field's printed label is located by
/// normalized cross-correlation over a window around its nominal position
/// (at relative scales 0.9/1.0/1.1), and the field's value box is produced
/// by decoding the measured offset against the template's prior box. The
/// image must match the template's nominal resolution within 10%.
std::vector<KeywordRegion> detect_regions(const RasterImage& image,
                                          const TicketTemplate& tpl,
                                          const GlyphSet& glyphs,
                                          const DetectorStage& stage,
                                          int search_radius = 12);

/// Character detection inside an ROI: every vocabulary glyph is correlated
/// over candidate windows derived from the ink segmentation, correlation
/// peaks above the threshold become scored detections, and the stage's NMS
/// resolves overlapping hypotheses. Scores are correlations clamped to
/// [0,1]. Requires a nonempty vocabulary.
std::vector<CharDetection> detect_chars(const RasterImage& roi,
                                        const GlyphSet& vocabulary,
                                        const DetectorStage& stage);

/// Position-only character cut (content left empty) for fields whose
/// vocabulary exceeds the direct-detection stage.
std::vector<CharDetection> cut_char_cells(const RasterImage& roi);

/// Classifies previously cut cells against a vocabulary; cells whose best
/// correlation stays below the threshold are dropped.
std::vector<CharDetection> recognize_chars(const RasterImage& roi,
                                           const std::vector<CharDetection>& cells,
                                           const GlyphSet& vocabulary,
                                           double threshold);

using AnchorScorer = std::function<double(const Box&)>;

/// Scores every anchor with the supplied scorer, keeps those at or above
/// the threshold (clipped to the image), and applies standard NMS. The grid
/// must cover the image: dims = ceil(image dims / stride).
std::vector<ScoredDetection> propose_text_regions(const RasterImage& image,
                                                  const AnchorGrid& grid,
                                                  const AnchorScorer& scorer,
                                                  double score_threshold,
                                                  double nms_iou);

/// Reference scorer: fraction of the anchor's area covered by ink.
std::vector<ScoredDetection> propose_text_regions(const RasterImage& image,
                                                  const AnchorGrid& grid,
                                                  double score_threshold,
                                                  double nms_iou);

struct TextLine {
  Box box;
  double score = 0.0;
};

/// Full-surface text line detection: anchor proposals over the whole image,
/// each surviving proposal snapped outward to the connected ink extent,
/// duplicates suppressed. Lines are returned top-to-bottom.
std::vector<TextLine> detect_text_lines(const RasterImage& image,
                                        const AnchorSpec& spec,
                                        double proposal_threshold,
                                        double proposal_nms_iou);

}  // namespace fintick

#endif  // FINTICK_DETECTOR_H_
