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

#ifndef FINTICK_TEMPLATE_REGISTRY_H_
#define FINTICK_TEMPLATE_REGISTRY_H_

#include <string>
#include <vector>

#include "fintick/geometry.h"

namespace fintick {

/// The closed set of business keyword classes a field may carry.
const std::vector<std::string>& known_keyword_classes();
bool is_known_keyword(const std::string& keyword);

/// One field of interest on a ticket.
///
/// Fixed-form templates print a constant label next to each value; the label
/// is the landmark the region detector correlates against. Non-fixed-form
/// templates render each field as a free-floating "PREFIX:value" line and
/// declare the prefix instead; label_box/value_box then hold the nominal
/// (jitter-free) layout.
struct TemplateField {
  std::string keyword;
  std::string label;      // printed landmark text, "" for non-fixed forms
  Box label_box;          // template coordinates
  Box value_box;          // prior box for the value, template coordinates
  std::string vocab;      // vocabulary id for the value glyphs
  std::string sampler;    // synthetic text sampler spec
  std::string pattern;    // validation regex, "" = unconstrained
  std::string prefix;     // line prefix, non-fixed forms only
};

struct TicketTemplate {
  std::string id;
  bool fixed_form = true;
  bool complex_vocab = false;
  int width = 0;   // nominal resolution
  int height = 0;
  std::vector<TemplateField> fields;

  const TemplateField* find_field(const std::string& keyword) const;
  /// Throws DataMismatchError when keywords are unknown or duplicated, boxes
  /// overlap, or boxes leave the nominal canvas.
  void validate() const;
};

/// Immutable template collection with the line-oriented file format:
///
///   template <id> form=fixed|nonfixed vocab=simple|complex width=W height=H
///   field keyword=... label=... labelbox=x0,y0,x1,y1 valuebox=x0,y0,x1,y1
///         vocab=... sampler=... pattern=... prefix=...
///   end
class TemplateRegistry {
 public:
  TemplateRegistry() = default;
  explicit TemplateRegistry(std::vector<TicketTemplate> templates);

  /// Ships the five reference templates: vat, taxi, quota (fixed form,
  /// simple vocabulary), train (fixed form, complex vocabulary), and
  /// bank-receipt (non-fixed form).
  static TemplateRegistry builtin();

  static TemplateRegistry load_file(const std::string& path);
  void save_file(const std::string& path) const;

  const TicketTemplate* find(const std::string& id) const;
  /// Like find but throws DataMismatchError for unregistered ids.
  const TicketTemplate& require(const std::string& id) const;

  std::vector<std::string> ids() const;
  int size() const { return static_cast<int>(templates_.size()); }
  const TicketTemplate& at(int i) const { return templates_[i]; }

 private:
  std::vector<TicketTemplate> templates_;
};

}  // namespace fintick

#endif  // FINTICK_TEMPLATE_REGISTRY_H_
