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

#include "fintick/metrics.h"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fintick/errors.h"

namespace fintick {
namespace {

const char* kRegressorNames[4] = {"(w+h)", "A_text", "A_info", "intercept"};

// Greedy matching for one class: detections in detection_before order, each
// taking the highest-IoU unmatched ground truth at or above 0.5.
struct ClassMatch {
  std::vector<bool> is_tp;  // per detection, in sorted order
  int gt_count = 0;
};

ClassMatch match_class(std::vector<ScoredDetection> dets,
                       const std::vector<Box>& gts) {
  std::sort(dets.begin(), dets.end(), detection_before);
  ClassMatch out;
  out.gt_count = static_cast<int>(gts.size());
  out.is_tp.resize(dets.size(), false);
  std::vector<bool> taken(gts.size(), false);
  for (size_t d = 0; d < dets.size(); ++d) {
    double best_iou = 0.5;
    int best_gt = -1;
    for (size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(dets[d].box, gts[g]);
      if (v >= best_iou && (best_gt < 0 || v > best_iou)) {
        best_iou = v;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      taken[best_gt] = true;
      out.is_tp[d] = true;
    }
  }
  return out;
}

double ap_from_match(const ClassMatch& match) {
  if (match.gt_count == 0) return 0.0;
  const size_t n = match.is_tp.size();
  std::vector<double> precision(n), recall(n);
  int tp = 0;
  for (size_t i = 0; i < n; ++i) {
    tp += match.is_tp[i] ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / match.gt_count;
  }
  // Precision envelope from the right (all-point interpolation).
  for (size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (match.is_tp[i]) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

std::map<std::string, const RecognitionResult*> index_results(
    const std::vector<RecognitionResult>& results,
    const std::vector<TicketEval>& truths) {
  std::map<std::string, const RecognitionResult*> by_id;
  for (const RecognitionResult& r : results) {
    by_id[r.source_id] = &r;
  }
  std::vector<std::string> missing;
  for (const TicketEval& t : truths) {
    if (by_id.find(t.source_id) == by_id.end()) missing.push_back(t.source_id);
  }
  std::set<std::string> truth_ids;
  for (const TicketEval& t : truths) truth_ids.insert(t.source_id);
  std::vector<std::string> extra;
  for (const RecognitionResult& r : results) {
    if (truth_ids.find(r.source_id) == truth_ids.end()) {
      extra.push_back(r.source_id);
    }
  }
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream os;
    os << "result/truth id mismatch;";
    if (!missing.empty()) {
      os << " missing results:";
      for (const std::string& id : missing) os << " " << id;
    }
    if (!extra.empty()) {
      os << " unmatched results:";
      for (const std::string& id : extra) os << " " << id;
    }
    throw DataMismatchError(os.str());
  }
  return by_id;
}

}  // namespace

void TimingObservation::validate() const {
  if (w < 0.0 || h < 0.0 || a_text < 0.0 || a_info < 0.0 || elapsed < 0.0) {
    throw std::invalid_argument("TimingObservation: negative component");
  }
  if (a_info > a_text || a_text > w * h) {
    throw std::invalid_argument(
        "TimingObservation: requires A_info <= A_text <= w*h");
  }
}

double predict_time(const TimeModel& m, double w, double h, double a_text,
                    double a_info) {
  return m.alpha * (w + h) + m.beta * a_text + m.gamma * a_info + m.t0;
}

TimeFit fit_time_model(const std::vector<TimingObservation>& observations) {
  const auto n = static_cast<Eigen::Index>(observations.size());
  if (n < 4) {
    throw FitError("fit_time_model: need at least 4 observations, got " +
                   std::to_string(observations.size()));
  }
  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const TimingObservation& o = observations[static_cast<size_t>(i)];
    o.validate();
    design(i, 0) = o.w + o.h;
    design(i, 1) = o.a_text;
    design(i, 2) = o.a_info;
    design(i, 3) = 1.0;
    y(i) = o.elapsed;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-8);
  if (qr.rank() < 4) {
    const auto perm = qr.colsPermutation().indices();
    std::ostringstream os;
    os << "fit_time_model: rank-deficient design; collinear regressors:";
    for (Eigen::Index k = qr.rank(); k < 4; ++k) {
      os << " " << kRegressorNames[perm(k)];
    }
    throw FitError(os.str());
  }

  const Eigen::VectorXd beta = qr.solve(y);
  TimeFit fit;
  fit.model = {beta(0), beta(1), beta(2), beta(3)};

  const Eigen::VectorXd prediction = design * beta;
  const double y_mean = y.mean();
  double ss_res = 0.0, ss_tot = 0.0;
  fit.residuals.resize(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = y(i) - prediction(i);
    fit.residuals[static_cast<size_t>(i)] = r;
    ss_res += r * r;
    ss_tot += (y(i) - y_mean) * (y(i) - y_mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double average_precision_50(const std::vector<ScoredDetection>& dets,
                            const std::vector<GtBox>& gts, bool* warned) {
  if (warned != nullptr) *warned = false;
  if (gts.empty()) {
    if (warned != nullptr) *warned = true;
    return 0.0;
  }
  std::map<int, std::vector<Box>> gt_by_class;
  for (const GtBox& g : gts) {
    gt_by_class[g.class_id].push_back(g.box);
  }
  std::map<int, std::vector<ScoredDetection>> det_by_class;
  for (const ScoredDetection& d : dets) {
    det_by_class[d.class_id].push_back(d);
  }

  double ap_sum = 0.0;
  for (const auto& [cls, boxes] : gt_by_class) {
    const auto it = det_by_class.find(cls);
    ap_sum += ap_from_match(match_class(
        it == det_by_class.end() ? std::vector<ScoredDetection>{} : it->second,
        boxes));
  }
  return ap_sum / static_cast<double>(gt_by_class.size());
}

double recall_at_iou(const std::vector<ScoredDetection>& dets,
                     const std::vector<GtBox>& gts, double iou_threshold) {
  if (gts.empty()) return 0.0;
  int matched = 0;
  std::map<int, std::vector<Box>> gt_by_class;
  for (const GtBox& g : gts) gt_by_class[g.class_id].push_back(g.box);
  for (const auto& [cls, boxes] : gt_by_class) {
    std::vector<bool> taken(boxes.size(), false);
    for (const ScoredDetection& d : dets) {
      if (d.class_id != cls) continue;
      int best_gt = -1;
      double best_iou = iou_threshold;
      for (size_t g = 0; g < boxes.size(); ++g) {
        if (taken[g]) continue;
        const double v = iou(d.box, boxes[g]);
        if (v >= best_iou && (best_gt < 0 || v > best_iou)) {
          best_iou = v;
          best_gt = static_cast<int>(g);
        }
      }
      if (best_gt >= 0) {
        taken[best_gt] = true;
        ++matched;
      }
    }
  }
  return static_cast<double>(matched) / static_cast<double>(gts.size());
}

double field_accuracy(const std::vector<RecognitionResult>& results,
                      const std::vector<TicketEval>& truths) {
  const auto by_id = index_results(results, truths);
  int total = 0;
  int correct = 0;
  for (const TicketEval& t : truths) {
    const RecognitionResult* r = by_id.at(t.source_id);
    for (const TicketEval::Field& f : t.fields) {
      ++total;
      const FieldValue* value = r->find(f.keyword);
      if (value != nullptr && value->text() == f.text) ++correct;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(correct) / total;
}

double character_accuracy(const std::vector<RecognitionResult>& results,
                          const std::vector<TicketEval>& truths) {
  const auto by_id = index_results(results, truths);
  int total = 0;
  int correct = 0;
  for (const TicketEval& t : truths) {
    const RecognitionResult* r = by_id.at(t.source_id);
    for (const TicketEval::Char& c : t.chars) {
      ++total;
      bool hit = false;
      for (const auto& [keyword, value] : r->entries) {
        for (size_t i = 0; i < value.glyphs.size() && !hit; ++i) {
          if (value.glyphs[i] == c.glyph &&
              iou(value.char_boxes[i], c.box) >= 0.5) {
            hit = true;
          }
        }
        if (hit) break;
      }
      if (hit) ++correct;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(correct) / total;
}

EvalReport evaluate_results(const std::vector<RecognitionResult>& results,
                            const std::vector<TicketEval>& truths) {
  EvalReport report;
  report.tickets = static_cast<int>(truths.size());
  report.field_accuracy = field_accuracy(results, truths);
  report.char_accuracy = character_accuracy(results, truths);

  // Character boxes scored per ticket, pooled with a class id per glyph.
  std::map<std::string, int> class_ids;
  const auto id_of = [&class_ids](const std::string& glyph) {
    return class_ids.emplace(glyph, static_cast<int>(class_ids.size()))
        .first->second;
  };
  const auto by_id = index_results(results, truths);

  std::vector<ScoredDetection> dets;
  std::vector<GtBox> gts;
  for (const TicketEval& t : truths) {
    report.truth_fields += static_cast<int>(t.fields.size());
    const RecognitionResult* r = by_id.at(t.source_id);
    for (const TicketEval::Char& c : t.chars) {
      gts.push_back({c.box, id_of(c.glyph)});
      ++report.truth_chars;
    }
    for (const auto& [keyword, value] : r->entries) {
      for (size_t i = 0; i < value.glyphs.size(); ++i) {
        dets.push_back({value.char_boxes[i], id_of(value.glyphs[i]),
                        value.char_scores[i]});
      }
    }
  }
  report.char_box_ap50 = average_precision_50(dets, gts, &report.ap_warning);
  report.char_box_recall = recall_at_iou(dets, gts, 0.5);

  std::map<int, std::vector<GtBox>> gt_by_class;
  for (const GtBox& g : gts) gt_by_class[g.class_id].push_back(g);
  for (const auto& [glyph, cls] : class_ids) {
    const auto it = gt_by_class.find(cls);
    if (it == gt_by_class.end()) continue;
    std::vector<ScoredDetection> class_dets;
    for (const ScoredDetection& d : dets) {
      if (d.class_id == cls) class_dets.push_back(d);
    }
    report.per_class_ap[glyph] =
        average_precision_50(class_dets, it->second, nullptr);
  }
  return report;
}

std::string EvalReport::to_tsv() const {
  std::ostringstream os;
  os << "tickets\t" << tickets << "\n";
  os << "truth_fields\t" << truth_fields << "\n";
  os << "truth_chars\t" << truth_chars << "\n";
  os << "field_accuracy\t" << field_accuracy << "\n";
  os << "char_accuracy\t" << char_accuracy << "\n";
  os << "char_box_ap50\t" << char_box_ap50 << "\n";
  os << "char_box_recall\t" << char_box_recall << "\n";
  if (ap_warning) os << "warning\tempty ground truth for AP\n";
  for (const auto& [glyph, ap] : per_class_ap) {
    os << "class_ap50\t" << glyph << "\t" << ap << "\n";
  }
  return os.str();
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["tickets"] = tickets;
  j["truth_fields"] = truth_fields;
  j["truth_chars"] = truth_chars;
  j["field_accuracy"] = field_accuracy;
  j["char_accuracy"] = char_accuracy;
  j["char_box_ap50"] = char_box_ap50;
  j["char_box_recall"] = char_box_recall;
  j["ap_warning"] = ap_warning;
  j["class_ap50"] = per_class_ap;
  return j.dump(2);
}

FpsReport measure_fps(
    int count, int warmup,
    const std::function<std::vector<std::pair<std::string, double>>(int)>& run_one) {
  if (count <= 0) {
    throw std::invalid_argument("measure_fps: empty corpus");
  }
  for (int i = 0; i < warmup; ++i) {
    run_one(i % count);
  }
  std::map<std::string, double> stage_totals;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < count; ++i) {
    for (const auto& [stage, seconds] : run_one(i)) {
      stage_totals[stage] += seconds;
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  FpsReport report;
  report.runs = count;
  const double elapsed = std::chrono::duration<double>(stop - start).count();
  report.mean_seconds = elapsed / count;
  report.fps = elapsed > 0.0 ? count / elapsed
                             : std::numeric_limits<double>::infinity();
  for (const auto& [stage, total] : stage_totals) {
    report.mean_stage_seconds[stage] = total / count;
  }
  return report;
}

}  // namespace fintick
