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

#include "fintick/router.h"

#include <chrono>
#include <cmath>
#include <map>

#include "fintick/errors.h"

namespace fintick {
namespace {

constexpr int kRoiMargin = 2;  // px around a value box when cropping the ROI

// Vocabularies beyond the direct-detection stage go through the character
// recognition model instead.
bool needs_recognition(const std::string& vocab_id) {
  return vocab_id == "name" || vocab_id == "full";
}

struct RoiCrop {
  RasterImage image;
  Box box;  // actual crop rectangle in document coordinates
};

RoiCrop crop_roi(const RasterImage& image, const Box& box) {
  const int x0 = std::max(0, static_cast<int>(std::floor(box.x_min())) - kRoiMargin);
  const int y0 = std::max(0, static_cast<int>(std::floor(box.y_min())) - kRoiMargin);
  const int x1 = std::min(image.width(),
                          static_cast<int>(std::ceil(box.x_max())) + kRoiMargin);
  const int y1 = std::min(image.height(),
                          static_cast<int>(std::ceil(box.y_max())) + kRoiMargin);
  return {image.crop(x0, y0, x1, y1), Box(x0, y0, x1, y1)};
}

bool starts_with_prefix(const std::vector<CharDetection>& chars,
                        const std::vector<std::string>& prefix) {
  if (chars.size() < prefix.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    if (chars[i].content != prefix[i]) return false;
  }
  return true;
}

class StageClock {
 public:
  explicit StageClock(PipelineRun& run) : run_(run) {}

  template <typename Fn>
  void run_stage(Stage stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    run_.stage_log.push_back(stage);
    run_.timings.push_back(
        {stage, std::chrono::duration<double>(stop - start).count()});
  }

 private:
  PipelineRun& run_;
};

}  // namespace

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::kRegionDetection:
      return "region-detection";
    case Stage::kCharDetection:
      return "char-detection";
    case Stage::kCharRecognition:
      return "char-recognition";
    case Stage::kFullSurfaceDetection:
      return "full-surface-detection";
    case Stage::kCharLevelCut:
      return "char-level-cut";
    case Stage::kAssembly:
      return "assembly";
  }
  return "?";
}

TicketClass classify_template(const TicketTemplate& tpl) {
  if (!tpl.fixed_form) return TicketClass::kII;
  return tpl.complex_vocab ? TicketClass::kIB : TicketClass::kIA;
}

TicketClass classify_ticket(const std::string& template_id,
                            const TemplateRegistry& registry) {
  return classify_template(registry.require(template_id));
}

PipelinePlan plan_for(TicketClass ticket_class) {
  switch (ticket_class) {
    case TicketClass::kIA:
      return {{Stage::kRegionDetection, Stage::kCharDetection,
               Stage::kAssembly}};
    case TicketClass::kIB:
      return {{Stage::kRegionDetection, Stage::kCharDetection,
               Stage::kCharRecognition, Stage::kAssembly}};
    case TicketClass::kII:
      return {{Stage::kFullSurfaceDetection, Stage::kCharLevelCut,
               Stage::kCharRecognition, Stage::kAssembly}};
  }
  throw std::invalid_argument("plan_for: bad ticket class");
}

PipelineModels PipelineModels::reference() {
  PipelineModels m;
  m.detection_glyphs = GlyphSet::builtin();
  m.recognition_glyphs = GlyphSet::builtin();
  return m;
}

PipelineRun run_pipeline(const RasterImage& image,
                         const std::string& template_id,
                         const TemplateRegistry& registry,
                         const PipelineModels& models,
                         const DetectorConfig& config) {
  const TicketTemplate& tpl = registry.require(template_id);
  const TicketClass cls = classify_template(tpl);
  const PipelinePlan plan = plan_for(cls);

  PipelineRun run;
  StageClock clock(run);

  // Fixed-form state.
  std::vector<KeywordRegion> regions;
  std::vector<RoiCrop> rois;
  std::map<int, std::vector<CharDetection>> region_chars;
  // Full-surface state.
  std::vector<TextLine> lines;
  std::vector<RoiCrop> line_rois;
  std::map<int, std::vector<CharDetection>> line_chars;

  for (Stage stage : plan.stages) {
    switch (stage) {
      case Stage::kRegionDetection:
        clock.run_stage(stage, [&] {
          regions = detect_regions(image, tpl, models.detection_glyphs,
                                   config.region_stage(), config.search_radius);
          for (const KeywordRegion& r : regions) {
            rois.push_back(crop_roi(image, r.box));
          }
        });
        break;

      case Stage::kCharDetection:
        clock.run_stage(stage, [&] {
          for (size_t i = 0; i < regions.size(); ++i) {
            const TemplateField* field = tpl.find_field(regions[i].keyword);
            if (field == nullptr) continue;
            if (needs_recognition(field->vocab)) {
              region_chars[static_cast<int>(i)] = cut_char_cells(rois[i].image);
            } else {
              region_chars[static_cast<int>(i)] = detect_chars(
                  rois[i].image,
                  models.detection_glyphs.subset(vocabulary_contents(field->vocab)),
                  config.char_stage());
            }
          }
        });
        break;

      case Stage::kCharRecognition:
        clock.run_stage(stage, [&] {
          if (!models.recognition_glyphs.has_value()) {
            throw PipelineError(to_string(Stage::kCharRecognition),
                                "char-recognition unavailable");
          }
          if (cls == TicketClass::kII) {
            const GlyphSet vocab = models.recognition_glyphs->subset(
                vocabulary_contents("full"));
            for (auto& [idx, cells] : line_chars) {
              cells = recognize_chars(line_rois[idx].image, cells, vocab,
                                      config.recognition_threshold);
            }
          } else {
            for (auto& [idx, cells] : region_chars) {
              const TemplateField* field = tpl.find_field(regions[idx].keyword);
              if (field == nullptr || !needs_recognition(field->vocab)) continue;
              cells = recognize_chars(
                  rois[idx].image, cells,
                  models.recognition_glyphs->subset(
                      vocabulary_contents(field->vocab)),
                  config.recognition_threshold);
            }
          }
        });
        break;

      case Stage::kFullSurfaceDetection:
        clock.run_stage(stage, [&] {
          lines = detect_text_lines(image, config.anchor_spec,
                                    config.proposal_threshold,
                                    config.proposal_nms_iou);
          for (const TextLine& line : lines) {
            line_rois.push_back(crop_roi(image, line.box));
          }
        });
        break;

      case Stage::kCharLevelCut:
        clock.run_stage(stage, [&] {
          for (size_t j = 0; j < lines.size(); ++j) {
            line_chars[static_cast<int>(j)] =
                cut_char_cells(line_rois[j].image);
          }
        });
        break;

      case Stage::kAssembly:
        clock.run_stage(stage, [&] {
          if (cls != TicketClass::kII) {
            std::vector<KeywordRegion> assembly_regions;
            assembly_regions.reserve(regions.size());
            for (size_t i = 0; i < regions.size(); ++i) {
              // Characters are ROI-local, so assembly translates by the
              // actual crop rectangle.
              assembly_regions.push_back(
                  {regions[i].keyword, rois[i].box, regions[i].score});
            }
            run.result = assemble_ticket(assembly_regions, region_chars);
          } else {
            // Route each recognized line to the field whose prefix it
            // carries; the remainder of the line is the value.
            std::vector<KeywordRegion> assembly_regions;
            std::map<int, std::vector<CharDetection>> assembly_chars;
            for (size_t j = 0; j < lines.size(); ++j) {
              const auto it = line_chars.find(static_cast<int>(j));
              if (it == line_chars.end() || it->second.empty()) continue;
              for (const TemplateField& field : tpl.fields) {
                if (field.prefix.empty()) continue;
                const std::vector<std::string> prefix = split_utf8(field.prefix);
                if (!starts_with_prefix(it->second, prefix)) continue;
                std::vector<CharDetection> value_chars(
                    it->second.begin() + static_cast<long>(prefix.size()),
                    it->second.end());
                double score_sum = 0.0;
                for (const CharDetection& c : value_chars) score_sum += c.score;
                const double region_score =
                    value_chars.empty() ? 0.0
                                        : score_sum / value_chars.size();
                const int idx = static_cast<int>(assembly_regions.size());
                assembly_regions.push_back(
                    {field.keyword, line_rois[j].box, region_score});
                assembly_chars[idx] = std::move(value_chars);
                break;
              }
            }
            run.result = assemble_ticket(assembly_regions, assembly_chars);
          }
          run.result.ticket_class = cls;
          run.result.warning = run.result.entries.empty();
        });
        break;
    }
  }
  return run;
}

}  // namespace fintick
