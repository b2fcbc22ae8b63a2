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

#ifndef FINTICK_TICKET_H_
#define FINTICK_TICKET_H_

#include <map>
#include <string>
#include <vector>

#include "fintick/geometry.h"
#include "fintick/template_registry.h"

namespace fintick {

/// I-A: fixed form, small fixed vocabulary. I-B: fixed form, large
/// vocabulary (name fields). II: non-fixed form.
enum class TicketClass { kIA, kIB, kII };

std::string to_string(TicketClass c);
TicketClass ticket_class_from_string(const std::string& s);

/// A detected field region: where one business keyword lives on the ticket.
struct KeywordRegion {
  std::string keyword;
  Box box;  // document coordinates
  double score = 0.0;
};

/// One recognized character within a region, in ROI-local coordinates.
/// Content may be empty while a position awaits a recognition stage.
struct CharDetection {
  Box position;
  std::string content;
  double score = 0.0;
};

/// The assembled string value of one field. glyphs/char_boxes/char_scores
/// are parallel arrays in reading order; char boxes are in document
/// coordinates. line_breaks holds the glyph indices at which a new text
/// line begins.
struct FieldValue {
  std::vector<std::string> glyphs;
  std::vector<Box> char_boxes;
  std::vector<double> char_scores;
  std::vector<int> line_breaks;
  double mean_score = 0.0;

  std::string text() const;
  bool empty() const { return glyphs.empty(); }
};

/// The recognition output for one ticket: an ordered keyword -> value map.
struct RecognitionResult {
  std::string source_id;
  TicketClass ticket_class = TicketClass::kIA;
  bool warning = false;  // set when nothing was detected
  std::vector<std::pair<std::string, FieldValue>> entries;

  const FieldValue* find(const std::string& keyword) const;
};

/// Orders characters into lines (vertical overlap of at least half the
/// smaller height), top to bottom then left to right, concatenates them,
/// and translates boxes from ROI-local to document coordinates.
FieldValue assemble_value(const std::vector<CharDetection>& chars,
                          const Box& roi_box);

/// Combines per-region characters into the final ticket result. Duplicate
/// keywords keep the higher-scoring region. chars_per_region maps region
/// index -> characters; indices must reference existing regions.
RecognitionResult assemble_ticket(
    const std::vector<KeywordRegion>& regions,
    const std::map<int, std::vector<CharDetection>>& chars_per_region);

enum class FieldVerdict { kOk, kPatternMismatch };

/// Checks the assembled text against the field's declared pattern; fields
/// without a pattern validate trivially.
FieldVerdict validate_field(const TemplateField& field,
                            const FieldValue& value);

/// JSON round trip (one object per ticket) and the line-oriented text form.
std::string result_to_json(const RecognitionResult& result);
RecognitionResult result_from_json(const std::string& json_text);
std::string result_to_tsv(const RecognitionResult& result);

}  // namespace fintick

#endif  // FINTICK_TICKET_H_
