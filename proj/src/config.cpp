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

#include "fintick/config.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fintick/errors.h"

namespace fs = std::filesystem;

namespace fintick {
namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& value,
                                      const std::string& key) {
  std::vector<double> out;
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      out.push_back(std::stod(trim(item)));
    } catch (const std::exception&) {
      throw ConfigError("bad number in " + key + ": '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    return std::stod(value);
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + value + "'");
  }
}

int parse_int(const std::string& value, const std::string& key) {
  try {
    return std::stoi(value);
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": '" + value + "'");
  }
}

}  // namespace

PipelineConfig PipelineConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);

  PipelineConfig cfg;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qualified = section + "." + key;

    if (qualified == "paths.registry") {
      cfg.registry_path = value;
    } else if (qualified == "paths.glyphs") {
      cfg.glyphs_path = value;
    } else if (qualified == "anchors.sizes") {
      cfg.detector.anchor_spec.sizes = parse_double_list(value, qualified);
    } else if (qualified == "anchors.ratios") {
      cfg.detector.anchor_spec.ratios = parse_double_list(value, qualified);
    } else if (qualified == "anchors.stride") {
      cfg.detector.anchor_spec.stride = parse_int(value, qualified);
    } else if (qualified == "nms.standard_iou") {
      cfg.detector.standard_nms_iou = parse_double(value, qualified);
    } else if (qualified == "nms.lucnms_iou") {
      cfg.detector.lucnms_iou = parse_double(value, qualified);
    } else if (qualified == "nms.proposal_iou") {
      cfg.detector.proposal_nms_iou = parse_double(value, qualified);
    } else if (qualified == "detector.region_threshold") {
      cfg.detector.region_threshold = parse_double(value, qualified);
    } else if (qualified == "detector.char_threshold") {
      cfg.detector.char_threshold = parse_double(value, qualified);
    } else if (qualified == "detector.recognition_threshold") {
      cfg.detector.recognition_threshold = parse_double(value, qualified);
    } else if (qualified == "detector.proposal_threshold") {
      cfg.detector.proposal_threshold = parse_double(value, qualified);
    } else if (qualified == "detector.search_radius") {
      cfg.detector.search_radius = parse_int(value, qualified);
    } else if (qualified == "gradcheck.loss") {
      cfg.gradcheck_loss = value;
    } else if (qualified == "run.workers") {
      cfg.workers = parse_int(value, qualified);
    } else if (qualified == "run.seed") {
      cfg.seed = static_cast<uint64_t>(std::stoull(value));
    } else {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": unknown key '" + qualified + "'");
    }
  }
  cfg.validate();
  return cfg;
}

void PipelineConfig::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path);
  out << "[paths]\n";
  if (!registry_path.empty()) out << "registry = " << registry_path << "\n";
  if (!glyphs_path.empty()) out << "glyphs = " << glyphs_path << "\n";
  out << "\n[anchors]\nsizes = ";
  for (size_t i = 0; i < detector.anchor_spec.sizes.size(); ++i) {
    out << (i ? "," : "") << detector.anchor_spec.sizes[i];
  }
  out << "\nratios = ";
  for (size_t i = 0; i < detector.anchor_spec.ratios.size(); ++i) {
    out << (i ? "," : "") << detector.anchor_spec.ratios[i];
  }
  out << "\nstride = " << detector.anchor_spec.stride << "\n";
  out << "\n[nms]\nstandard_iou = " << detector.standard_nms_iou
      << "\nlucnms_iou = " << detector.lucnms_iou
      << "\nproposal_iou = " << detector.proposal_nms_iou << "\n";
  out << "\n[detector]\nregion_threshold = " << detector.region_threshold
      << "\nchar_threshold = " << detector.char_threshold
      << "\nrecognition_threshold = " << detector.recognition_threshold
      << "\nproposal_threshold = " << detector.proposal_threshold
      << "\nsearch_radius = " << detector.search_radius << "\n";
  out << "\n[gradcheck]\nloss = " << gradcheck_loss << "\n";
  out << "\n[run]\nworkers = " << workers << "\nseed = " << seed << "\n";
}

void PipelineConfig::validate() const {
  detector.validate();
  if (workers < 1) throw ConfigError("run.workers must be >= 1");
  if (gradcheck_loss != "smooth-l1" && gradcheck_loss != "iou" &&
      gradcheck_loss != "giou" && gradcheck_loss != "ciou" &&
      gradcheck_loss != "all") {
    throw ConfigError("gradcheck.loss must be smooth-l1|iou|giou|ciou|all");
  }
  if (!registry_path.empty() && !fs::exists(registry_path)) {
    throw ConfigError("registry path does not exist: " + registry_path);
  }
  if (!glyphs_path.empty() && !fs::exists(glyphs_path)) {
    throw ConfigError("glyph path does not exist: " + glyphs_path);
  }
}

TemplateRegistry PipelineConfig::load_registry() const {
  return registry_path.empty() ? TemplateRegistry::builtin()
                               : TemplateRegistry::load_file(registry_path);
}

GlyphSet PipelineConfig::load_glyphs() const {
  return glyphs_path.empty() ? GlyphSet::builtin()
                             : GlyphSet::load_directory(glyphs_path);
}

}  // namespace fintick
