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

#include "fintick/ticket.h"

#include <algorithm>
#include <numeric>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fintick/errors.h"

namespace fintick {
namespace {

// Vertical overlap of at least half the smaller height puts two characters
// on the same text line.
bool same_line(const Box& a, const Box& b) {
  const double overlap =
      std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  const double min_h = std::min(a.height(), b.height());
  return overlap >= 0.5 * min_h;
}

nlohmann::json box_to_json(const Box& b) {
  return nlohmann::json::array({b.x_min(), b.y_min(), b.x_max(), b.y_max()});
}

Box box_from_json(const nlohmann::json& j) {
  return Box(j.at(0).get<double>(), j.at(1).get<double>(),
             j.at(2).get<double>(), j.at(3).get<double>());
}

}  // namespace

std::string to_string(TicketClass c) {
  switch (c) {
    case TicketClass::kIA:
      return "I-A";
    case TicketClass::kIB:
      return "I-B";
    case TicketClass::kII:
      return "II";
  }
  return "?";
}

TicketClass ticket_class_from_string(const std::string& s) {
  if (s == "I-A") return TicketClass::kIA;
  if (s == "I-B") return TicketClass::kIB;
  if (s == "II") return TicketClass::kII;
  throw DataMismatchError("unknown ticket class '" + s + "'");
}

std::string FieldValue::text() const {
  std::string out;
  for (const std::string& g : glyphs) {
    out += g;
  }
  return out;
}

const FieldValue* RecognitionResult::find(const std::string& keyword) const {
  for (const auto& [k, v] : entries) {
    if (k == keyword) return &v;
  }
  return nullptr;
}

FieldValue assemble_value(const std::vector<CharDetection>& chars,
                          const Box& roi_box) {
  FieldValue out;
  if (chars.empty()) return out;

  // Union-find line clustering over the vertical-overlap relation.
  const size_t n = chars.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find_root = [&parent](size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (same_line(chars[i].position, chars[j].position)) {
        parent[find_root(i)] = find_root(j);
      }
    }
  }

  std::map<size_t, std::vector<size_t>> lines;
  for (size_t i = 0; i < n; ++i) {
    lines[find_root(i)].push_back(i);
  }

  // Order lines top to bottom by their topmost character, then leftmost.
  std::vector<std::vector<size_t>> ordered;
  ordered.reserve(lines.size());
  for (auto& [root, members] : lines) {
    std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
      const Box& ba = chars[a].position;
      const Box& bb = chars[b].position;
      if (ba.x_min() != bb.x_min()) return ba.x_min() < bb.x_min();
      if (ba.y_min() != bb.y_min()) return ba.y_min() < bb.y_min();
      return chars[a].content < chars[b].content;
    });
    ordered.push_back(members);
  }
  std::sort(ordered.begin(), ordered.end(),
            [&](const std::vector<size_t>& a, const std::vector<size_t>& b) {
              double ay = chars[a.front()].position.y_min();
              double by = chars[b.front()].position.y_min();
              for (size_t i : a) ay = std::min(ay, chars[i].position.y_min());
              for (size_t i : b) by = std::min(by, chars[i].position.y_min());
              if (ay != by) return ay < by;
              return chars[a.front()].position.x_min() <
                     chars[b.front()].position.x_min();
            });

  double score_sum = 0.0;
  for (size_t li = 0; li < ordered.size(); ++li) {
    if (li > 0) {
      out.line_breaks.push_back(static_cast<int>(out.glyphs.size()));
    }
    for (size_t i : ordered[li]) {
      out.glyphs.push_back(chars[i].content);
      out.char_boxes.push_back(
          chars[i].position.translated(roi_box.x_min(), roi_box.y_min()));
      out.char_scores.push_back(chars[i].score);
      score_sum += chars[i].score;
    }
  }
  out.mean_score = score_sum / static_cast<double>(n);
  return out;
}

RecognitionResult assemble_ticket(
    const std::vector<KeywordRegion>& regions,
    const std::map<int, std::vector<CharDetection>>& chars_per_region) {
  for (const auto& [idx, chars] : chars_per_region) {
    if (idx < 0 || idx >= static_cast<int>(regions.size())) {
      throw std::invalid_argument(
          "assemble_ticket: character list references region " +
          std::to_string(idx) + " of " + std::to_string(regions.size()));
    }
  }

  RecognitionResult result;
  // keyword -> (region score, entry index); duplicates keep the higher score.
  std::map<std::string, std::pair<double, size_t>> chosen;
  for (size_t i = 0; i < regions.size(); ++i) {
    const KeywordRegion& region = regions[i];
    const auto chars_it = chars_per_region.find(static_cast<int>(i));
    FieldValue value =
        chars_it == chars_per_region.end()
            ? FieldValue{}
            : assemble_value(chars_it->second, region.box);

    const auto it = chosen.find(region.keyword);
    if (it == chosen.end()) {
      chosen[region.keyword] = {region.score, result.entries.size()};
      result.entries.emplace_back(region.keyword, std::move(value));
    } else if (region.score > it->second.first) {
      result.entries[it->second.second].second = std::move(value);
      it->second.first = region.score;
    }
  }
  return result;
}

FieldVerdict validate_field(const TemplateField& field,
                            const FieldValue& value) {
  if (field.pattern.empty()) return FieldVerdict::kOk;
  const std::regex re(field.pattern);
  return std::regex_match(value.text(), re) ? FieldVerdict::kOk
                                            : FieldVerdict::kPatternMismatch;
}

std::string result_to_json(const RecognitionResult& result) {
  nlohmann::json j;
  j["source_id"] = result.source_id;
  j["ticket_class"] = to_string(result.ticket_class);
  j["warning"] = result.warning;
  j["entries"] = nlohmann::json::array();
  for (const auto& [keyword, value] : result.entries) {
    nlohmann::json entry;
    entry["keyword"] = keyword;
    entry["text"] = value.text();
    entry["mean_score"] = value.mean_score;
    entry["line_breaks"] = value.line_breaks;
    entry["chars"] = nlohmann::json::array();
    for (size_t i = 0; i < value.glyphs.size(); ++i) {
      nlohmann::json c;
      c["glyph"] = value.glyphs[i];
      c["box"] = box_to_json(value.char_boxes[i]);
      c["score"] = value.char_scores[i];
      entry["chars"].push_back(std::move(c));
    }
    j["entries"].push_back(std::move(entry));
  }
  return j.dump();
}

RecognitionResult result_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("bad result JSON: ") + e.what());
  }
  RecognitionResult result;
  result.source_id = j.at("source_id").get<std::string>();
  result.ticket_class =
      ticket_class_from_string(j.at("ticket_class").get<std::string>());
  result.warning = j.value("warning", false);
  for (const auto& entry : j.at("entries")) {
    FieldValue value;
    value.mean_score = entry.at("mean_score").get<double>();
    value.line_breaks = entry.value("line_breaks", std::vector<int>{});
    for (const auto& c : entry.at("chars")) {
      value.glyphs.push_back(c.at("glyph").get<std::string>());
      value.char_boxes.push_back(box_from_json(c.at("box")));
      value.char_scores.push_back(c.at("score").get<double>());
    }
    result.entries.emplace_back(entry.at("keyword").get<std::string>(),
                                std::move(value));
  }
  return result;
}

std::string result_to_tsv(const RecognitionResult& result) {
  std::ostringstream os;
  os << "ticket\t" << result.source_id << "\t" << to_string(result.ticket_class)
     << "\t" << (result.warning ? 1 : 0) << "\n";
  for (const auto& [keyword, value] : result.entries) {
    os << "field\t" << keyword << "\t" << value.text() << "\t"
       << value.mean_score << "\n";
    for (size_t i = 0; i < value.glyphs.size(); ++i) {
      const Box& b = value.char_boxes[i];
      os << "char\t" << value.glyphs[i] << "\t" << b.x_min() << "\t"
         << b.y_min() << "\t" << b.x_max() << "\t" << b.y_max() << "\t"
         << value.char_scores[i] << "\n";
    }
  }
  return os.str();
}

}  // namespace fintick
