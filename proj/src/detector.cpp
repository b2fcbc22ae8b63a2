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

#include "fintick/detector.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fintick/errors.h"

namespace fintick {
namespace {

constexpr float kInkThreshold = 0.5f;
constexpr int kCellJitter = 2;       // extra slack around candidate windows
constexpr int kRoiMargin = 2;        // px added around value boxes when cropping
constexpr double kMinPatchNorm = 1e-3;
constexpr int kSnapInflate = 8;      // ink-extent growth step for line snapping
constexpr int kSnapMaxIters = 64;

const double kRegionScales[] = {0.9, 1.0, 1.1};

struct PreparedTemplate {
  std::vector<float> zero_mean;  // row-major w*h
  double norm = 0.0;
  int w = 0;
  int h = 0;
};

PreparedTemplate prepare_template(const RasterImage& bitmap) {
  PreparedTemplate out;
  out.w = bitmap.width();
  out.h = bitmap.height();
  out.zero_mean.resize(bitmap.pixels().size());
  double mean = 0.0;
  for (float v : bitmap.pixels()) mean += v;
  mean /= static_cast<double>(bitmap.pixels().size());
  double norm_sq = 0.0;
  for (size_t i = 0; i < bitmap.pixels().size(); ++i) {
    const double d = bitmap.pixels()[i] - mean;
    out.zero_mean[i] = static_cast<float>(d);
    norm_sq += d * d;
  }
  out.norm = std::sqrt(norm_sq);
  return out;
}

// Normalized cross-correlation of a prepared template at integer position
// (x, y); 0 when either side is flat.
double ncc_at(const RasterImage& img, const PreparedTemplate& t, int x, int y) {
  if (t.norm < kMinPatchNorm) return 0.0;
  double patch_sum = 0.0;
  for (int r = 0; r < t.h; ++r) {
    for (int c = 0; c < t.w; ++c) {
      patch_sum += img.at(x + c, y + r);
    }
  }
  const double patch_mean = patch_sum / (static_cast<double>(t.w) * t.h);
  double dot = 0.0;
  double patch_norm_sq = 0.0;
  size_t i = 0;
  for (int r = 0; r < t.h; ++r) {
    for (int c = 0; c < t.w; ++c, ++i) {
      const double d = img.at(x + c, y + r) - patch_mean;
      dot += d * t.zero_mean[i];
      patch_norm_sq += d * d;
    }
  }
  const double patch_norm = std::sqrt(patch_norm_sq);
  if (patch_norm < kMinPatchNorm) return 0.0;
  return dot / (patch_norm * t.norm);
}

double clamp_score(double v) { return std::clamp(v, 0.0, 1.0); }

RasterImage resize_nearest(const RasterImage& src, int w, int h) {
  RasterImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = std::min(src.height() - 1, y * src.height() / h);
    for (int x = 0; x < w; ++x) {
      const int sx = std::min(src.width() - 1, x * src.width() / w);
      out.at(x, y) = src.at(sx, sy);
    }
  }
  return out;
}

struct CellWindow {
  int x_lo = 0, x_hi = 0;  // inclusive candidate ranges for the cell origin
  int y_lo = 0, y_hi = 0;
};

// Candidate glyph-cell origins that could cover an ink segment.
CellWindow window_for_segment(const IntRect& seg, int img_w, int img_h) {
  CellWindow w;
  w.x_lo = std::max(0, seg.x1 - kGlyphWidth - kCellJitter);
  w.x_hi = std::min(img_w - kGlyphWidth, seg.x0 + kCellJitter);
  w.y_lo = std::max(0, seg.y1 - kGlyphHeight - kCellJitter);
  w.y_hi = std::min(img_h - kGlyphHeight, seg.y0 + kCellJitter);
  return w;
}

// Correlates every vocabulary glyph over the candidate windows and emits
// 3x3-local-maximum peaks at or above the threshold.
std::vector<ScoredDetection> correlate_cells(
    const RasterImage& roi, const std::vector<IntRect>& segments,
    const std::vector<PreparedTemplate>& prepared, double threshold) {
  std::vector<ScoredDetection> dets;
  for (const IntRect& seg : segments) {
    const CellWindow w = window_for_segment(seg, roi.width(), roi.height());
    if (w.x_hi < w.x_lo || w.y_hi < w.y_lo) continue;
    const int nx = w.x_hi - w.x_lo + 1;
    const int ny = w.y_hi - w.y_lo + 1;

    std::vector<double> grid(static_cast<size_t>(nx) * ny);
    for (size_t g = 0; g < prepared.size(); ++g) {
      for (int yi = 0; yi < ny; ++yi) {
        for (int xi = 0; xi < nx; ++xi) {
          grid[static_cast<size_t>(yi) * nx + xi] =
              ncc_at(roi, prepared[g], w.x_lo + xi, w.y_lo + yi);
        }
      }
      for (int yi = 0; yi < ny; ++yi) {
        for (int xi = 0; xi < nx; ++xi) {
          const double s = grid[static_cast<size_t>(yi) * nx + xi];
          if (s < threshold) continue;
          // 3x3 local maximum; plateau ties go to the first position in
          // scan order.
          bool is_peak = true;
          for (int dy = -1; dy <= 1 && is_peak; ++dy) {
            for (int dx = -1; dx <= 1 && is_peak; ++dx) {
              if (dx == 0 && dy == 0) continue;
              const int qx = xi + dx;
              const int qy = yi + dy;
              if (qx < 0 || qy < 0 || qx >= nx || qy >= ny) continue;
              const double qs = grid[static_cast<size_t>(qy) * nx + qx];
              if (qs > s) is_peak = false;
              if (qs == s && (qy < yi || (qy == yi && qx < xi))) is_peak = false;
            }
          }
          if (!is_peak) continue;
          const double x = w.x_lo + xi;
          const double y = w.y_lo + yi;
          dets.push_back({Box(x, y, x + kGlyphWidth, y + kGlyphHeight),
                          static_cast<int>(g), clamp_score(s)});
        }
      }
    }
  }
  return dets;
}

std::vector<PreparedTemplate> prepare_vocabulary(const GlyphSet& vocabulary) {
  std::vector<PreparedTemplate> prepared;
  prepared.reserve(vocabulary.size());
  for (int i = 0; i < vocabulary.size(); ++i) {
    prepared.push_back(prepare_template(vocabulary.at(i).bitmap));
  }
  return prepared;
}

// Tight ink bounding box within a clamped rect; false when inkless.
bool ink_bbox(const InkIntegral& ink, IntRect rect, IntRect* out) {
  rect.x0 = std::clamp(rect.x0, 0, ink.width());
  rect.y0 = std::clamp(rect.y0, 0, ink.height());
  rect.x1 = std::clamp(rect.x1, rect.x0, ink.width());
  rect.y1 = std::clamp(rect.y1, rect.y0, ink.height());
  if (ink.count(rect.x0, rect.y0, rect.x1, rect.y1) == 0) return false;
  IntRect bb = rect;
  while (bb.x0 < bb.x1 && ink.count(bb.x0, bb.y0, bb.x0 + 1, bb.y1) == 0) ++bb.x0;
  while (bb.x1 > bb.x0 && ink.count(bb.x1 - 1, bb.y0, bb.x1, bb.y1) == 0) --bb.x1;
  while (bb.y0 < bb.y1 && ink.count(bb.x0, bb.y0, bb.x1, bb.y0 + 1) == 0) ++bb.y0;
  while (bb.y1 > bb.y0 && ink.count(bb.x0, bb.y1 - 1, bb.x1, bb.y1) == 0) --bb.y1;
  *out = bb;
  return true;
}

}  // namespace

DetectorStage DetectorStage::region_defaults() {
  DetectorStage s;
  s.kind = Kind::kRegion;
  s.score_threshold = 0.6;
  s.nms_policy = NmsPolicy::kStandard;
  s.nms_iou = 0.5;
  return s;
}

DetectorStage DetectorStage::character_defaults() {
  DetectorStage s;
  s.kind = Kind::kCharacter;
  s.score_threshold = 0.7;
  s.nms_policy = NmsPolicy::kLucnms;
  s.nms_iou = 0.5;
  return s;
}

DetectorStage DetectorConfig::region_stage() const {
  DetectorStage s = DetectorStage::region_defaults();
  s.score_threshold = region_threshold;
  s.nms_iou = standard_nms_iou;
  return s;
}

DetectorStage DetectorConfig::char_stage() const {
  DetectorStage s = DetectorStage::character_defaults();
  s.score_threshold = char_threshold;
  s.nms_iou = lucnms_iou;
  return s;
}

void DetectorConfig::validate() const {
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(region_threshold) || !in_unit(char_threshold) ||
      !in_unit(recognition_threshold) || !in_unit(proposal_threshold) ||
      !in_unit(standard_nms_iou) || !in_unit(lucnms_iou) ||
      !in_unit(proposal_nms_iou)) {
    throw ConfigError("detector thresholds must lie in [0,1]");
  }
  if (search_radius < 0) throw ConfigError("search_radius must be >= 0");
  anchor_spec.validate();
}

std::vector<IntRect> segment_ink_cells(const RasterImage& img,
                                       const IntRect& within,
                                       float ink_threshold) {
  const int x0 = std::clamp(within.x0, 0, img.width());
  const int y0 = std::clamp(within.y0, 0, img.height());
  const int x1 = std::clamp(within.x1, x0, img.width());
  const int y1 = std::clamp(within.y1, y0, img.height());

  const auto row_has_ink = [&](int y) {
    for (int x = x0; x < x1; ++x) {
      if (img.at(x, y) <= ink_threshold) return true;
    }
    return false;
  };

  std::vector<IntRect> cells;
  int band_start = -1;
  for (int y = y0; y <= y1; ++y) {
    const bool ink = y < y1 && row_has_ink(y);
    if (ink && band_start < 0) band_start = y;
    if (!ink && band_start >= 0) {
      // Column runs inside the band.
      const int by0 = band_start;
      const int by1 = y;
      band_start = -1;
      int run_start = -1;
      for (int x = x0; x <= x1; ++x) {
        bool col_ink = false;
        if (x < x1) {
          for (int yy = by0; yy < by1; ++yy) {
            if (img.at(x, yy) <= ink_threshold) {
              col_ink = true;
              break;
            }
          }
        }
        if (col_ink && run_start < 0) run_start = x;
        if (!col_ink && run_start >= 0) {
          IntRect cell{run_start, by0, x, by1};
          // Tighten rows to the cell's own ink.
          int cy0 = cell.y1, cy1 = cell.y0;
          for (int yy = cell.y0; yy < cell.y1; ++yy) {
            for (int xx = cell.x0; xx < cell.x1; ++xx) {
              if (img.at(xx, yy) <= ink_threshold) {
                cy0 = std::min(cy0, yy);
                cy1 = std::max(cy1, yy + 1);
                break;
              }
            }
          }
          cell.y0 = cy0;
          cell.y1 = cy1;
          cells.push_back(cell);
          run_start = -1;
        }
      }
    }
  }
  return cells;
}

std::vector<KeywordRegion> detect_regions(const RasterImage& image,
                                          const TicketTemplate& tpl,
                                          const GlyphSet& glyphs,
                                          const DetectorStage& stage,
                                          int search_radius) {
  const double sw = static_cast<double>(image.width()) / tpl.width;
  const double sh = static_cast<double>(image.height()) / tpl.height;
  if (std::abs(sw - 1.0) > 0.1 || std::abs(sh - 1.0) > 0.1) {
    throw DataMismatchError(
        "detect_regions: image does not match template '" + tpl.id +
        "' nominal resolution within 10%");
  }

  std::vector<ScoredDetection> found;
  std::vector<KeywordRegion> candidates;
  for (size_t fi = 0; fi < tpl.fields.size(); ++fi) {
    const TemplateField& field = tpl.fields[fi];
    if (field.label.empty()) continue;  // no landmark to correlate against
    const RasterImage label = render_text(glyphs, split_utf8(field.label));

    const int lx = static_cast<int>(std::lround(field.label_box.x_min()));
    const int ly = static_cast<int>(std::lround(field.label_box.y_min()));
    double best_score = -1.0;
    int best_x = lx, best_y = ly;
    double best_scale = 1.0;
    for (double scale : kRegionScales) {
      const int tw = std::max(1, static_cast<int>(std::lround(label.width() * scale)));
      const int th = std::max(1, static_cast<int>(std::lround(label.height() * scale)));
      const PreparedTemplate prepared = prepare_template(
          scale == 1.0 ? label : resize_nearest(label, tw, th));
      for (int y = ly - search_radius; y <= ly + search_radius; ++y) {
        if (y < 0 || y + th > image.height()) continue;
        for (int x = lx - search_radius; x <= lx + search_radius; ++x) {
          if (x < 0 || x + tw > image.width()) continue;
          const double s = ncc_at(image, prepared, x, y);
          if (s > best_score) {
            best_score = s;
            best_x = x;
            best_y = y;
            best_scale = scale;
          }
        }
      }
    }
    if (best_score < stage.score_threshold) continue;

    // The measured label offset and scale, decoded over the field's prior.
    RegressionTarget t;
    t.tx = (best_x - lx) / field.value_box.width();
    t.ty = (best_y - ly) / field.value_box.height();
    t.tw = std::log(best_scale);
    t.th = std::log(best_scale);
    const Box refined = decode(t, field.value_box);

    found.push_back(
        {refined, static_cast<int>(fi), clamp_score(best_score)});
  }

  const std::vector<ScoredDetection> kept = standard_nms(found, stage.nms_iou);

  // Back to template field order.
  std::vector<ScoredDetection> ordered = kept;
  std::sort(ordered.begin(), ordered.end(),
            [](const ScoredDetection& a, const ScoredDetection& b) {
              return a.class_id < b.class_id;
            });
  candidates.reserve(ordered.size());
  for (const ScoredDetection& d : ordered) {
    candidates.push_back(
        {tpl.fields[static_cast<size_t>(d.class_id)].keyword, d.box, d.score});
  }
  return candidates;
}

std::vector<CharDetection> detect_chars(const RasterImage& roi,
                                        const GlyphSet& vocabulary,
                                        const DetectorStage& stage) {
  if (vocabulary.size() == 0) {
    throw std::invalid_argument("detect_chars: empty vocabulary");
  }
  if (roi.empty()) return {};

  const std::vector<IntRect> segments =
      segment_ink_cells(roi, {0, 0, roi.width(), roi.height()}, kInkThreshold);
  const std::vector<PreparedTemplate> prepared = prepare_vocabulary(vocabulary);
  std::vector<ScoredDetection> dets =
      correlate_cells(roi, segments, prepared, stage.score_threshold);

  dets = stage.nms_policy == DetectorStage::NmsPolicy::kLucnms
             ? lucnms(dets, stage.nms_iou)
             : standard_nms(dets, stage.nms_iou);

  std::vector<CharDetection> chars;
  chars.reserve(dets.size());
  for (const ScoredDetection& d : dets) {
    chars.push_back({d.box, vocabulary.at(d.class_id).content, d.score});
  }
  return chars;
}

std::vector<CharDetection> cut_char_cells(const RasterImage& roi) {
  std::vector<CharDetection> cells;
  for (const IntRect& seg : segment_ink_cells(
           roi, {0, 0, roi.width(), roi.height()}, kInkThreshold)) {
    cells.push_back({seg.to_box(), "", 1.0});
  }
  return cells;
}

std::vector<CharDetection> recognize_chars(const RasterImage& roi,
                                           const std::vector<CharDetection>& cells,
                                           const GlyphSet& vocabulary,
                                           double threshold) {
  if (vocabulary.size() == 0) {
    throw std::invalid_argument("recognize_chars: empty vocabulary");
  }
  const std::vector<PreparedTemplate> prepared = prepare_vocabulary(vocabulary);

  std::vector<CharDetection> out;
  for (const CharDetection& cell : cells) {
    const IntRect seg{static_cast<int>(std::floor(cell.position.x_min())),
                      static_cast<int>(std::floor(cell.position.y_min())),
                      static_cast<int>(std::ceil(cell.position.x_max())),
                      static_cast<int>(std::ceil(cell.position.y_max()))};
    const std::vector<ScoredDetection> matches = correlate_cells(
        roi, {seg}, prepared, threshold);
    const ScoredDetection* best = nullptr;
    for (const ScoredDetection& m : matches) {
      if (best == nullptr || detection_before(m, *best)) best = &m;
    }
    if (best == nullptr) continue;
    out.push_back(
        {best->box, vocabulary.at(best->class_id).content, best->score});
  }
  return out;
}

std::vector<ScoredDetection> propose_text_regions(const RasterImage& image,
                                                  const AnchorGrid& grid,
                                                  const AnchorScorer& scorer,
                                                  double score_threshold,
                                                  double nms_iou) {
  const int want_w = (image.width() + grid.spec.stride - 1) / grid.spec.stride;
  const int want_h = (image.height() + grid.spec.stride - 1) / grid.spec.stride;
  if (grid.grid_w != want_w || grid.grid_h != want_h) {
    throw std::invalid_argument(
        "propose_text_regions: grid does not cover the image");
  }
  std::vector<ScoredDetection> dets;
  for (const Box& anchor : grid.boxes) {
    const double s = scorer(anchor);
    if (s < score_threshold) continue;
    const Box clipped = anchor.clipped(image.width(), image.height());
    if (clipped.area() <= 0.0) continue;
    dets.push_back({clipped, 0, clamp_score(s)});
  }
  return standard_nms(dets, nms_iou);
}

std::vector<ScoredDetection> propose_text_regions(const RasterImage& image,
                                                  const AnchorGrid& grid,
                                                  double score_threshold,
                                                  double nms_iou) {
  const InkIntegral ink(image, kInkThreshold);
  const AnchorScorer scorer = [&ink](const Box& anchor) {
    const double a = anchor.area();
    if (a <= 0.0) return 0.0;
    return static_cast<double>(ink.count(anchor)) / a;
  };
  return propose_text_regions(image, grid, scorer, score_threshold, nms_iou);
}

std::vector<TextLine> detect_text_lines(const RasterImage& image,
                                        const AnchorSpec& spec,
                                        double proposal_threshold,
                                        double proposal_nms_iou) {
  const int grid_w = (image.width() + spec.stride - 1) / spec.stride;
  const int grid_h = (image.height() + spec.stride - 1) / spec.stride;
  const AnchorGrid grid = generate_anchors(spec, grid_h, grid_w);
  const std::vector<ScoredDetection> proposals =
      propose_text_regions(image, grid, proposal_threshold, proposal_nms_iou);

  const InkIntegral ink(image, kInkThreshold);
  std::vector<ScoredDetection> snapped;
  for (const ScoredDetection& p : proposals) {
    // Grow to the connected ink extent: inflate, retighten, repeat.
    IntRect rect{static_cast<int>(std::floor(p.box.x_min())),
                 static_cast<int>(std::floor(p.box.y_min())),
                 static_cast<int>(std::ceil(p.box.x_max())),
                 static_cast<int>(std::ceil(p.box.y_max()))};
    IntRect bb;
    bool has_ink = false;
    for (int iter = 0; iter < kSnapMaxIters; ++iter) {
      const IntRect inflated{rect.x0 - kSnapInflate, rect.y0 - kSnapInflate,
                             rect.x1 + kSnapInflate, rect.y1 + kSnapInflate};
      if (!ink_bbox(ink, inflated, &bb)) break;
      has_ink = true;
      if (bb.x0 == rect.x0 && bb.y0 == rect.y0 && bb.x1 == rect.x1 &&
          bb.y1 == rect.y1) {
        break;
      }
      rect = bb;
    }
    if (!has_ink) continue;
    snapped.push_back({rect.to_box(), 0, p.score});
  }

  std::vector<TextLine> lines;
  for (const ScoredDetection& d : standard_nms(snapped, 0.5)) {
    lines.push_back({d.box, d.score});
  }
  std::sort(lines.begin(), lines.end(), [](const TextLine& a, const TextLine& b) {
    if (a.box.y_min() != b.box.y_min()) return a.box.y_min() < b.box.y_min();
    return a.box.x_min() < b.box.x_min();
  });
  return lines;
}

}  // namespace fintick
