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

#ifndef FINTICK_ROUTER_H_
#define FINTICK_ROUTER_H_

#include <optional>
#include <string>
#include <vector>

#include "fintick/detector.h"
#include "fintick/glyphs.h"
#include "fintick/image.h"
#include "fintick/template_registry.h"
#include "fintick/ticket.h"

namespace fintick {

enum class Stage {
  kRegionDetection,
  kCharDetection,
  kCharRecognition,
  kFullSurfaceDetection,
  kCharLevelCut,
  kAssembly,
};

std::string to_string(Stage stage);

struct PipelinePlan {
  std::vector<Stage> stages;
};

/// Class rules: fixed form with a simple vocabulary is I-A, fixed form with
/// a complex vocabulary is I-B, non-fixed form is II.
TicketClass classify_template(const TicketTemplate& tpl);
TicketClass classify_ticket(const std::string& template_id,
                            const TemplateRegistry& registry);

/// I-A:  region-detection, char-detection, assembly
/// I-B:  region-detection, char-detection, char-recognition, assembly
/// II:   full-surface-detection, char-level-cut, char-recognition, assembly
PipelinePlan plan_for(TicketClass ticket_class);

/// The detector models a pipeline runs with. detection_glyphs backs the
/// direct-detection stages; recognition_glyphs backs the character
/// recognition stage and may be absent, in which case plans containing that
/// stage fail with a PipelineError naming it.
struct PipelineModels {
  GlyphSet detection_glyphs;
  std::optional<GlyphSet> recognition_glyphs;

  static PipelineModels reference();  // builtin glyphs on both stages
};

struct StageTiming {
  Stage stage;
  double seconds = 0.0;
};

struct PipelineRun {
  RecognitionResult result;
  std::vector<Stage> stage_log;  // equals the plan on success
  std::vector<StageTiming> timings;
};

/// Runs the plan for the ticket's class over one image. Zero detected
/// regions is not an error: it yields an empty result with the warning
/// flag. A missing stage model raises PipelineError.
PipelineRun run_pipeline(const RasterImage& image,
                         const std::string& template_id,
                         const TemplateRegistry& registry,
                         const PipelineModels& models,
                         const DetectorConfig& config);

}  // namespace fintick

#endif  // FINTICK_ROUTER_H_
