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

#ifndef FINTICK_CONFIG_H_
#define FINTICK_CONFIG_H_

#include <cstdint>
#include <string>

#include "fintick/detector.h"
#include "fintick/glyphs.h"
#include "fintick/template_registry.h"

namespace fintick {

/// Whole-pipeline configuration. The file format is line-oriented
/// `key = value` under `[section]` headers; unknown keys are errors. Every
/// key can also be overridden by the CLI flag of the same name. Empty
/// registry/glyph paths select the built-in assets; nonempty paths must
/// exist.
struct PipelineConfig {
  std::string registry_path;  // [paths] registry
  std::string glyphs_path;    // [paths] glyphs
  DetectorConfig detector;    // [anchors], [nms], [detector]
  std::string gradcheck_loss = "ciou";  // [gradcheck] loss
  int workers = 1;            // [run] workers
  uint64_t seed = 1;          // [run] seed

  static PipelineConfig load_file(const std::string& path);
  void save_file(const std::string& path) const;
  void validate() const;  // throws ConfigError

  TemplateRegistry load_registry() const;
  GlyphSet load_glyphs() const;
};

}  // namespace fintick

#endif  // FINTICK_CONFIG_H_
