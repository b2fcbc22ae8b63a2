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

#include "fintick/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "fintick/errors.h"
#include "fintick/router.h"

namespace fs = std::filesystem;

namespace fintick {
namespace {

constexpr double kLineJitterX = 10.0;  // non-fixed-form layout wobble
constexpr double kLineJitterY = 6.0;

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string two_digits(int v) {
  std::string s = std::to_string(v);
  return s.size() == 1 ? "0" + s : s;
}

// Sampler specs: "digits:N", "digits:A-B", "date", "amount", "name:A-B".
std::vector<std::string> sample_field_text(const std::string& sampler,
                                           std::mt19937_64& rng) {
  const auto uniform = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const auto parse_len_range = [&](const std::string& spec, int& lo, int& hi) {
    const size_t colon = spec.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("sampler '" + spec + "' missing length");
    }
    const std::string range = spec.substr(colon + 1);
    const size_t dash = range.find('-');
    lo = std::stoi(range.substr(0, dash));
    hi = dash == std::string::npos ? lo : std::stoi(range.substr(dash + 1));
  };

  std::vector<std::string> out;
  if (sampler.rfind("digits", 0) == 0) {
    int lo = 0, hi = 0;
    parse_len_range(sampler, lo, hi);
    const int len = uniform(lo, hi);
    for (int i = 0; i < len; ++i) {
      out.emplace_back(1, static_cast<char>('0' + uniform(0, 9)));
    }
  } else if (sampler == "date") {
    const int year = uniform(2015, 2025);
    const int month = uniform(1, 12);
    const int day = uniform(1, 28);
    const std::string text =
        std::to_string(year) + "-" + two_digits(month) + "-" + two_digits(day);
    out = split_utf8(text);
  } else if (sampler == "amount") {
    std::string text;
    if (uniform(0, 1) == 1) text += utf8_from_codepoint(0xA5);
    const int int_len = uniform(1, 4);
    text += static_cast<char>('0' + uniform(1, 9));
    for (int i = 1; i < int_len; ++i) {
      text += static_cast<char>('0' + uniform(0, 9));
    }
    text += '.';
    text += static_cast<char>('0' + uniform(0, 9));
    text += static_cast<char>('0' + uniform(0, 9));
    out = split_utf8(text);
  } else if (sampler.rfind("name", 0) == 0) {
    int lo = 0, hi = 0;
    parse_len_range(sampler, lo, hi);
    const auto vocab = vocabulary_contents("name");
    const int len = uniform(lo, hi);
    for (int i = 0; i < len; ++i) {
      out.push_back(vocab[uniform(0, static_cast<int>(vocab.size()) - 1)]);
    }
  } else {
    throw ConfigError("unknown sampler '" + sampler + "'");
  }
  return out;
}

void render_glyph_run(RasterImage& canvas, const GlyphSet& glyphs,
                      const std::vector<std::string>& seq, int x0, int y0) {
  for (size_t k = 0; k < seq.size(); ++k) {
    const int gi = glyphs.find(seq[k]);
    if (gi < 0) {
      throw DataMismatchError("render: glyph '" + seq[k] + "' not in set");
    }
    canvas.blit_min(glyphs.at(gi).bitmap,
                    x0 + static_cast<int>(k) * kGlyphPitch, y0);
  }
}

long as_long(double v) { return std::lround(v); }

}  // namespace

void NoiseSpec::validate() const {
  if (!(gaussian_sigma >= 0.0 && gaussian_sigma <= 0.1)) {
    throw std::invalid_argument("NoiseSpec: sigma outside [0, 0.1]");
  }
  if (std::abs(translate_x) > 8 || std::abs(translate_y) > 8) {
    throw std::invalid_argument("NoiseSpec: |translation| > 8 px");
  }
}

std::string GroundTruthField::text() const {
  std::string out;
  for (const std::string& g : glyphs) out += g;
  return out;
}

std::vector<GroundTruthChar> GroundTruth::char_rows() const {
  std::vector<GroundTruthChar> rows;
  for (const GroundTruthField& f : fields) {
    for (size_t i = 0; i < f.glyphs.size(); ++i) {
      rows.push_back({f.keyword, f.glyphs[i], f.char_boxes[i]});
    }
  }
  return rows;
}

RenderedTicket render_ticket(const TicketTemplate& tpl, const GlyphSet& glyphs,
                             uint64_t seed, const NoiseSpec& noise) {
  noise.validate();
  RenderedTicket out;
  out.image = RasterImage(tpl.width, tpl.height, 1.0f);
  out.truth.ticket_class = classify_template(tpl);

  std::mt19937_64 text_rng(seed);
  const int dx = noise.translate_x;
  const int dy = noise.translate_y;

  for (const TemplateField& field : tpl.fields) {
    const std::vector<std::string> value = sample_field_text(field.sampler, text_rng);

    int lx = static_cast<int>(field.label_box.x_min());
    int ly = static_cast<int>(field.label_box.y_min());
    int vx = static_cast<int>(field.value_box.x_min());
    int vy = static_cast<int>(field.value_box.y_min());
    if (!tpl.fixed_form) {
      // Free-form layout: the whole line drifts around its nominal origin.
      const int jx = std::uniform_int_distribution<int>(
          -static_cast<int>(kLineJitterX), static_cast<int>(kLineJitterX))(text_rng);
      const int jy = std::uniform_int_distribution<int>(
          -static_cast<int>(kLineJitterY), static_cast<int>(kLineJitterY))(text_rng);
      lx += jx;
      ly += jy;
      vx += jx;
      vy += jy;
    }

    if (!field.label.empty()) {
      render_glyph_run(out.image, glyphs, split_utf8(field.label), lx + dx,
                       ly + dy);
    }
    if (!field.prefix.empty()) {
      render_glyph_run(out.image, glyphs, split_utf8(field.prefix), lx + dx,
                       ly + dy);
    }
    render_glyph_run(out.image, glyphs, value, vx + dx, vy + dy);

    GroundTruthField truth;
    truth.keyword = field.keyword;
    truth.glyphs = value;
    for (size_t k = 0; k < value.size(); ++k) {
      const double x = vx + dx + static_cast<double>(k) * kGlyphPitch;
      const double y = vy + dy;
      truth.char_boxes.emplace_back(x, y, x + kGlyphWidth, y + kGlyphHeight);
    }
    out.truth.fields.push_back(std::move(truth));
  }

  if (noise.gaussian_sigma > 0.0) {
    std::mt19937_64 noise_rng(seed ^ 0x5DEECE66Dull);
    std::normal_distribution<float> gauss(
        0.0f, static_cast<float>(noise.gaussian_sigma));
    for (float& px : out.image.pixels()) {
      px = std::clamp(px + gauss(noise_rng), 0.0f, 1.0f);
    }
  }
  return out;
}

std::vector<int> largest_remainder_allocate(int total,
                                            const std::vector<double>& weights) {
  if (total < 0) throw std::invalid_argument("allocate: negative total");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (sum <= 0.0) throw std::invalid_argument("allocate: weights sum to 0");

  std::vector<int> counts(weights.size(), 0);
  std::vector<std::pair<double, size_t>> remainders;
  int assigned = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    const double exact = total * weights[i] / sum;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - counts[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int k = 0; k < total - assigned; ++k) {
    counts[remainders[static_cast<size_t>(k) % remainders.size()].second] += 1;
  }
  return counts;
}

std::vector<PlannedTicket> plan_corpus(const TemplateRegistry& registry,
                                       const std::vector<std::string>& template_ids,
                                       int count, const CorpusMix& mix,
                                       uint64_t seed, double gaussian_sigma,
                                       int max_translate) {
  if (count < 0) throw std::invalid_argument("plan_corpus: negative count");
  if (max_translate < 0 || max_translate > 8) {
    throw std::invalid_argument("plan_corpus: max_translate outside [0, 8]");
  }
  const std::vector<std::string> ids =
      template_ids.empty() ? registry.ids() : template_ids;

  std::vector<const TicketTemplate*> type_one;
  std::vector<const TicketTemplate*> type_two;
  for (const std::string& id : ids) {
    const TicketTemplate& tpl = registry.require(id);
    (classify_template(tpl) == TicketClass::kII ? type_two : type_one)
        .push_back(&tpl);
  }
  if (count > 0 && (type_one.empty() || type_two.empty()) &&
      mix.type_one > 0.0 && mix.type_two > 0.0) {
    throw DataMismatchError(
        "plan_corpus: the mix needs both type I and type II templates");
  }

  const std::vector<int> class_counts =
      largest_remainder_allocate(count, {mix.type_one, mix.type_two});

  std::vector<PlannedTicket> plan;
  plan.reserve(count);
  std::mt19937_64 corpus_rng(splitmix64(seed ^ 0xC0FFEEull));
  std::uniform_int_distribution<int> shift(-max_translate, max_translate);

  const auto emit = [&](const std::vector<const TicketTemplate*>& group,
                        int group_count) {
    if (group.empty() || group_count <= 0) return;
    const std::vector<int> per_template = largest_remainder_allocate(
        group_count, std::vector<double>(group.size(), 1.0));
    for (size_t g = 0; g < group.size(); ++g) {
      for (int k = 0; k < per_template[g]; ++k) {
        PlannedTicket t;
        std::ostringstream id;
        id << "t" << std::setw(6) << std::setfill('0') << plan.size();
        t.id = id.str();
        t.template_id = group[g]->id;
        t.ticket_class = classify_template(*group[g]);
        t.seed = splitmix64(seed + plan.size() + 1);
        t.noise.gaussian_sigma = gaussian_sigma;
        t.noise.translate_x = max_translate > 0 ? shift(corpus_rng) : 0;
        t.noise.translate_y = max_translate > 0 ? shift(corpus_rng) : 0;
        plan.push_back(std::move(t));
      }
    }
  };
  emit(type_one, class_counts[0]);
  emit(type_two, class_counts[1]);
  return plan;
}

void generate_corpus(const TemplateRegistry& registry, const GlyphSet& glyphs,
                     const std::vector<PlannedTicket>& plan,
                     const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "images", ec);
  if (!ec) fs::create_directories(fs::path(out_dir) / "truth", ec);
  if (ec) {
    throw IoError("cannot create corpus directory " + out_dir + ": " +
                  ec.message());
  }

  std::ofstream manifest(fs::path(out_dir) / "manifest.tsv");
  if (!manifest) throw IoError("cannot write manifest in " + out_dir);

  for (const PlannedTicket& t : plan) {
    const TicketTemplate& tpl = registry.require(t.template_id);
    const RenderedTicket rendered = render_ticket(tpl, glyphs, t.seed, t.noise);

    write_pgm(rendered.image, corpus_image_path(out_dir, t.id));

    std::ofstream truth(fs::path(out_dir) / "truth" / (t.id + ".tsv"));
    if (!truth) throw IoError("cannot write truth for " + t.id);
    for (const GroundTruthChar& row : rendered.truth.char_rows()) {
      truth << row.keyword << "\t" << row.glyph << "\t"
            << as_long(row.box.x_min()) << "\t" << as_long(row.box.y_min())
            << "\t" << as_long(row.box.x_max()) << "\t"
            << as_long(row.box.y_max()) << "\n";
    }

    manifest << t.id << "\t" << t.template_id << "\t"
             << to_string(t.ticket_class) << "\t" << t.seed << "\t"
             << t.noise.gaussian_sigma << "\t" << t.noise.translate_x << "\t"
             << t.noise.translate_y << "\n";
  }
  if (!manifest) throw IoError("short write to manifest in " + out_dir);
}

std::vector<ManifestEntry> read_manifest(const std::string& corpus_dir) {
  const std::string path = (fs::path(corpus_dir) / "manifest.tsv").string();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    ManifestEntry e;
    std::string cls;
    if (!(is >> e.id >> e.template_id >> cls >> e.seed >> e.gaussian_sigma >>
          e.translate_x >> e.translate_y)) {
      throw IoError(path + ": bad manifest row '" + line + "'");
    }
    e.ticket_class = ticket_class_from_string(cls);
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<GroundTruthChar> read_truth(const std::string& corpus_dir,
                                        const std::string& id) {
  const std::string path =
      (fs::path(corpus_dir) / "truth" / (id + ".tsv")).string();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<GroundTruthChar> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    GroundTruthChar row;
    double x0, y0, x1, y1;
    if (!(is >> row.keyword >> row.glyph >> x0 >> y0 >> x1 >> y1)) {
      throw IoError(path + ": bad truth row '" + line + "'");
    }
    row.box = Box(x0, y0, x1, y1);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GroundTruthField> group_truth_fields(
    const std::vector<GroundTruthChar>& rows) {
  std::vector<GroundTruthField> fields;
  for (const GroundTruthChar& row : rows) {
    GroundTruthField* field = nullptr;
    for (GroundTruthField& f : fields) {
      if (f.keyword == row.keyword) {
        field = &f;
        break;
      }
    }
    if (field == nullptr) {
      fields.push_back(GroundTruthField{row.keyword, {}, {}});
      field = &fields.back();
    }
    field->glyphs.push_back(row.glyph);
    field->char_boxes.push_back(row.box);
  }
  return fields;
}

std::string corpus_image_path(const std::string& corpus_dir,
                              const std::string& id) {
  return (fs::path(corpus_dir) / "images" / (id + ".pgm")).string();
}

}  // namespace fintick
