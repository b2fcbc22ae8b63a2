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

#include "fintick/template_registry.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "fintick/errors.h"
#include "fintick/glyphs.h"

namespace fintick {
namespace {

constexpr double kLabelGap = 8.0;  // px between a label and its value box

std::string box_to_string(const Box& b) {
  std::ostringstream os;
  os << b.x_min() << "," << b.y_min() << "," << b.x_max() << "," << b.y_max();
  return os.str();
}

Box box_from_string(const std::string& s) {
  std::istringstream is(s);
  double v[4];
  char comma;
  for (int i = 0; i < 4; ++i) {
    if (i > 0 && !(is >> comma && comma == ',')) {
      throw IoError("bad box literal '" + s + "'");
    }
    if (!(is >> v[i])) throw IoError("bad box literal '" + s + "'");
  }
  return Box(v[0], v[1], v[2], v[3]);
}

std::map<std::string, std::string> parse_kv_tokens(std::istringstream& is,
                                                   int line_no) {
  std::map<std::string, std::string> kv;
  std::string token;
  while (is >> token) {
    const size_t eq = token.find('=');
    if (eq == std::string::npos) {
      throw IoError("registry line " + std::to_string(line_no) +
                    ": expected key=value, got '" + token + "'");
    }
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

std::string get_or(const std::map<std::string, std::string>& kv,
                   const std::string& key, const std::string& fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

std::string get_required(const std::map<std::string, std::string>& kv,
                         const std::string& key, int line_no) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw IoError("registry line " + std::to_string(line_no) + ": missing " +
                  key);
  }
  return it->second;
}

double text_width(const std::string& text) {
  const auto n = static_cast<int>(split_utf8(text).size());
  return n == 0 ? 0.0 : (n - 1) * kGlyphPitch + kGlyphWidth;
}

double glyph_run_width(int n) {
  return n == 0 ? 0.0 : (n - 1) * kGlyphPitch + kGlyphWidth;
}

// Lays out "LABEL: value" on one baseline at (x, y), with the value box wide
// enough for max_len glyphs.
TemplateField labeled_field(const std::string& keyword,
                            const std::string& label, double x, double y,
                            int max_len, const std::string& vocab,
                            const std::string& sampler,
                            const std::string& pattern) {
  TemplateField f;
  f.keyword = keyword;
  f.label = label;
  f.label_box = Box(x, y, x + text_width(label), y + kGlyphHeight);
  const double vx = f.label_box.x_max() + kLabelGap;
  f.value_box = Box(vx, y, vx + glyph_run_width(max_len), y + kGlyphHeight);
  f.vocab = vocab;
  f.sampler = sampler;
  f.pattern = pattern;
  return f;
}

// Non-fixed-form line "PREFIX:value" starting at (x, y); the value glyphs
// continue on the same pitch grid as the prefix.
TemplateField prefixed_field(const std::string& keyword,
                             const std::string& prefix, double x, double y,
                             int max_len, const std::string& vocab,
                             const std::string& sampler,
                             const std::string& pattern) {
  TemplateField f;
  f.keyword = keyword;
  f.prefix = prefix;
  const auto prefix_len = static_cast<int>(split_utf8(prefix).size());
  f.label_box = Box(x, y, x + text_width(prefix), y + kGlyphHeight);
  const double vx = x + prefix_len * kGlyphPitch;
  f.value_box = Box(vx, y, vx + glyph_run_width(max_len), y + kGlyphHeight);
  f.vocab = vocab;
  f.sampler = sampler;
  f.pattern = pattern;
  return f;
}

const char* kAmountPattern = "^(\xC2\xA5)?[0-9]{1,6}\\.[0-9]{2}$";
const char* kDatePattern = "^[0-9]{4}-[0-9]{2}-[0-9]{2}$";

}  // namespace

const std::vector<std::string>& known_keyword_classes() {
  static const std::vector<std::string> kKeywords{
      "invoice-code", "invoice-number", "date",
      "amount",       "verification-code", "name"};
  return kKeywords;
}

bool is_known_keyword(const std::string& keyword) {
  const auto& all = known_keyword_classes();
  return std::find(all.begin(), all.end(), keyword) != all.end();
}

const TemplateField* TicketTemplate::find_field(
    const std::string& keyword) const {
  for (const TemplateField& f : fields) {
    if (f.keyword == keyword) return &f;
  }
  return nullptr;
}

void TicketTemplate::validate() const {
  if (id.empty()) throw DataMismatchError("template with empty id");
  if (width <= 0 || height <= 0) {
    throw DataMismatchError("template '" + id + "': bad resolution");
  }
  const Box canvas(0, 0, width, height);
  for (size_t i = 0; i < fields.size(); ++i) {
    const TemplateField& f = fields[i];
    if (!is_known_keyword(f.keyword)) {
      throw DataMismatchError("template '" + id + "': unknown keyword '" +
                              f.keyword + "'");
    }
    for (size_t j = 0; j < i; ++j) {
      if (fields[j].keyword == f.keyword) {
        throw DataMismatchError("template '" + id + "': duplicate keyword '" +
                                f.keyword + "'");
      }
      if (intersection_area(fields[j].value_box, f.value_box) > 0.0 ||
          intersection_area(fields[j].label_box, f.label_box) > 0.0 ||
          intersection_area(fields[j].value_box, f.label_box) > 0.0 ||
          intersection_area(fields[j].label_box, f.value_box) > 0.0) {
        throw DataMismatchError("template '" + id + "': overlapping fields '" +
                                fields[j].keyword + "' and '" + f.keyword +
                                "'");
      }
    }
    if (!contains(canvas, f.value_box) || !contains(canvas, f.label_box)) {
      throw DataMismatchError("template '" + id + "': field '" + f.keyword +
                              "' outside nominal resolution");
    }
  }
}

TemplateRegistry::TemplateRegistry(std::vector<TicketTemplate> templates)
    : templates_(std::move(templates)) {
  for (size_t i = 0; i < templates_.size(); ++i) {
    templates_[i].validate();
    for (size_t j = 0; j < i; ++j) {
      if (templates_[j].id == templates_[i].id) {
        throw DataMismatchError("duplicate template id '" + templates_[i].id +
                                "'");
      }
    }
  }
}

TemplateRegistry TemplateRegistry::builtin() {
  std::vector<TicketTemplate> all;

  {
    TicketTemplate t;
    t.id = "vat";
    t.fixed_form = true;
    t.complex_vocab = false;
    t.width = 2048;
    t.height = 1024;
    t.fields = {
        labeled_field("invoice-code", "CODE:", 60, 60, 12, "digits",
                      "digits:10-12", "^[0-9]{10,12}$"),
        labeled_field("invoice-number", "NO:", 900, 60, 8, "digits", "digits:8",
                      "^[0-9]{8}$"),
        labeled_field("date", "DATE:", 60, 160, 10, "date", "date",
                      kDatePattern),
        labeled_field("amount", "AMT:", 900, 160, 10, "amount", "amount",
                      kAmountPattern),
        labeled_field("verification-code", "CHK:", 60, 260, 10, "digits",
                      "digits:10", "^[0-9]{10}$"),
    };
    all.push_back(std::move(t));
  }
  {
    TicketTemplate t;
    t.id = "taxi";
    t.fixed_form = true;
    t.complex_vocab = false;
    t.width = 1024;
    t.height = 600;
    t.fields = {
        labeled_field("invoice-code", "CODE:", 40, 40, 12, "digits",
                      "digits:10-12", "^[0-9]{10,12}$"),
        labeled_field("date", "DATE:", 40, 120, 10, "date", "date",
                      kDatePattern),
        labeled_field("amount", "AMT:", 40, 200, 10, "amount", "amount",
                      kAmountPattern),
    };
    all.push_back(std::move(t));
  }
  {
    TicketTemplate t;
    t.id = "quota";
    t.fixed_form = true;
    t.complex_vocab = false;
    t.width = 1024;
    t.height = 600;
    t.fields = {
        labeled_field("invoice-code", "CODE:", 40, 40, 12, "digits",
                      "digits:10-12", "^[0-9]{10,12}$"),
        labeled_field("invoice-number", "NO:", 40, 120, 8, "digits", "digits:8",
                      "^[0-9]{8}$"),
        labeled_field("amount", "AMT:", 40, 200, 10, "amount", "amount",
                      kAmountPattern),
    };
    all.push_back(std::move(t));
  }
  {
    TicketTemplate t;
    t.id = "train";
    t.fixed_form = true;
    t.complex_vocab = true;  // carries a name field
    t.width = 1500;
    t.height = 520;
    t.fields = {
        labeled_field("invoice-number", "NO:", 50, 40, 8, "digits", "digits:8",
                      "^[0-9]{8}$"),
        labeled_field("date", "DATE:", 50, 120, 10, "date", "date",
                      kDatePattern),
        labeled_field("name", "NAME:", 50, 200, 4, "name", "name:2-4", "^.+$"),
        labeled_field("amount", "AMT:", 50, 280, 10, "amount", "amount",
                      kAmountPattern),
    };
    all.push_back(std::move(t));
  }
  {
    TicketTemplate t;
    t.id = "bank-receipt";
    t.fixed_form = false;
    t.complex_vocab = true;
    t.width = 1024;
    t.height = 600;
    t.fields = {
        prefixed_field("invoice-number", "NO:", 60, 80, 8, "digits", "digits:8",
                       "^[0-9]{8}$"),
        prefixed_field("date", "DATE:", 60, 180, 10, "date", "date",
                       kDatePattern),
        prefixed_field("amount", "AMT:", 60, 280, 10, "amount", "amount",
                       kAmountPattern),
        prefixed_field("name", "NAME:", 60, 380, 4, "name", "name:2-4", "^.+$"),
    };
    all.push_back(std::move(t));
  }

  return TemplateRegistry(std::move(all));
}

TemplateRegistry TemplateRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open registry " + path);

  std::vector<TicketTemplate> templates;
  TicketTemplate current;
  bool in_template = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::string kind;
    if (!(is >> kind)) continue;

    if (kind == "template") {
      if (in_template) {
        throw IoError("registry line " + std::to_string(line_no) +
                      ": nested template");
      }
      in_template = true;
      current = TicketTemplate{};
      if (!(is >> current.id)) {
        throw IoError("registry line " + std::to_string(line_no) +
                      ": missing template id");
      }
      const auto kv = parse_kv_tokens(is, line_no);
      const std::string form = get_required(kv, "form", line_no);
      if (form != "fixed" && form != "nonfixed") {
        throw IoError("registry line " + std::to_string(line_no) +
                      ": form must be fixed|nonfixed");
      }
      current.fixed_form = form == "fixed";
      const std::string vocab = get_required(kv, "vocab", line_no);
      if (vocab != "simple" && vocab != "complex") {
        throw IoError("registry line " + std::to_string(line_no) +
                      ": vocab must be simple|complex");
      }
      current.complex_vocab = vocab == "complex";
      current.width = std::stoi(get_required(kv, "width", line_no));
      current.height = std::stoi(get_required(kv, "height", line_no));
    } else if (kind == "field") {
      if (!in_template) {
        throw IoError("registry line " + std::to_string(line_no) +
                      ": field outside template");
      }
      const auto kv = parse_kv_tokens(is, line_no);
      TemplateField f;
      f.keyword = get_required(kv, "keyword", line_no);
      f.label = get_or(kv, "label", "");
      f.prefix = get_or(kv, "prefix", "");
      f.label_box = box_from_string(get_required(kv, "labelbox", line_no));
      f.value_box = box_from_string(get_required(kv, "valuebox", line_no));
      f.vocab = get_required(kv, "vocab", line_no);
      f.sampler = get_or(kv, "sampler", "");
      f.pattern = get_or(kv, "pattern", "");
      current.fields.push_back(std::move(f));
    } else if (kind == "end") {
      if (!in_template) {
        throw IoError("registry line " + std::to_string(line_no) +
                      ": stray end");
      }
      in_template = false;
      templates.push_back(std::move(current));
    } else {
      throw IoError("registry line " + std::to_string(line_no) +
                    ": unknown directive '" + kind + "'");
    }
  }
  if (in_template) throw IoError(path + ": unterminated template block");
  return TemplateRegistry(std::move(templates));
}

void TemplateRegistry::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write registry " + path);
  out << "# fintick template registry\n";
  for (const TicketTemplate& t : templates_) {
    out << "template " << t.id << " form=" << (t.fixed_form ? "fixed" : "nonfixed")
        << " vocab=" << (t.complex_vocab ? "complex" : "simple")
        << " width=" << t.width << " height=" << t.height << "\n";
    for (const TemplateField& f : t.fields) {
      out << "field keyword=" << f.keyword;
      if (!f.label.empty()) out << " label=" << f.label;
      if (!f.prefix.empty()) out << " prefix=" << f.prefix;
      out << " labelbox=" << box_to_string(f.label_box)
          << " valuebox=" << box_to_string(f.value_box) << " vocab=" << f.vocab;
      if (!f.sampler.empty()) out << " sampler=" << f.sampler;
      if (!f.pattern.empty()) out << " pattern=" << f.pattern;
      out << "\n";
    }
    out << "end\n";
  }
  if (!out) throw IoError("short write to " + path);
}

const TicketTemplate* TemplateRegistry::find(const std::string& id) const {
  for (const TicketTemplate& t : templates_) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const TicketTemplate& TemplateRegistry::require(const std::string& id) const {
  const TicketTemplate* t = find(id);
  if (t == nullptr) {
    throw DataMismatchError("unregistered template '" + id + "'");
  }
  return *t;
}

std::vector<std::string> TemplateRegistry::ids() const {
  std::vector<std::string> out;
  out.reserve(templates_.size());
  for (const TicketTemplate& t : templates_) {
    out.push_back(t.id);
  }
  return out;
}

}  // namespace fintick
