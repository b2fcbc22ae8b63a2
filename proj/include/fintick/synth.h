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

#ifndef FINTICK_SYNTH_H_
#define FINTICK_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fintick/glyphs.h"
#include "fintick/image.h"
#include "fintick/template_registry.h"
#include "fintick/ticket.h"

namespace fintick {

/// Additive Gaussian intensity noise plus a global integer translation.
/// Ground truth reflects the clean geometry plus the translation.
struct NoiseSpec {
  double gaussian_sigma = 0.0;  // in [0, 0.1]
  int translate_x = 0;          // |t| <= 8
  int translate_y = 0;

  void validate() const;  // throws std::invalid_argument
};

struct GroundTruthChar {
  std::string keyword;
  std::string glyph;
  Box box;  // document coordinates
};

struct GroundTruthField {
  std::string keyword;
  std::vector<std::string> glyphs;
  std::vector<Box> char_boxes;

  std::string text() const;
};

struct GroundTruth {
  TicketClass ticket_class = TicketClass::kIA;
  std::vector<GroundTruthField> fields;

  std::vector<GroundTruthChar> char_rows() const;  // reading order
};

struct RenderedTicket {
  RasterImage image;
  GroundTruth truth;
};

/// Deterministic render: field texts are sampled from the per-field sampler
/// with the given seed, glyphs are blitted at layout positions (plus the
/// layout jitter for non-fixed forms), and noise is applied last.
RenderedTicket render_ticket(const TicketTemplate& tpl, const GlyphSet& glyphs,
                             uint64_t seed, const NoiseSpec& noise);

/// Corpus class mix; the default matches the observed ticket population
/// split between fixed-form and non-fixed-form kinds.
struct CorpusMix {
  double type_one = 0.6827;  // classes I-A and I-B
  double type_two = 0.3173;  // class II
};

struct PlannedTicket {
  std::string id;
  std::string template_id;
  TicketClass ticket_class = TicketClass::kIA;
  uint64_t seed = 0;
  NoiseSpec noise;
};

/// Allocates `total` into integer counts proportional to `weights` by the
/// largest-remainder rule (ties favor lower index).
std::vector<int> largest_remainder_allocate(int total,
                                            const std::vector<double>& weights);

/// Plans a corpus without rendering: the mix splits the count between type
/// I and type II templates, and each class's share is spread evenly over
/// its templates. Per-ticket translations are sampled from the corpus seed
/// up to max_translate.
std::vector<PlannedTicket> plan_corpus(const TemplateRegistry& registry,
                                       const std::vector<std::string>& template_ids,
                                       int count, const CorpusMix& mix,
                                       uint64_t seed, double gaussian_sigma,
                                       int max_translate);

/// Corpus layout on disk:
///   images/<id>.pgm
///   truth/<id>.tsv     one row per character: keyword glyph x0 y0 x1 y1
///   manifest.tsv       id template class seed sigma dx dy
void generate_corpus(const TemplateRegistry& registry, const GlyphSet& glyphs,
                     const std::vector<PlannedTicket>& plan,
                     const std::string& out_dir);

struct ManifestEntry {
  std::string id;
  std::string template_id;
  TicketClass ticket_class = TicketClass::kIA;
  uint64_t seed = 0;
  double gaussian_sigma = 0.0;
  int translate_x = 0;
  int translate_y = 0;
};

std::vector<ManifestEntry> read_manifest(const std::string& corpus_dir);
std::vector<GroundTruthChar> read_truth(const std::string& corpus_dir,
                                        const std::string& id);
std::vector<GroundTruthField> group_truth_fields(
    const std::vector<GroundTruthChar>& rows);
std::string corpus_image_path(const std::string& corpus_dir,
                              const std::string& id);

}  // namespace fintick

#endif  // FINTICK_SYNTH_H_
