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

#ifndef FINTICK_METRICS_H_
#define FINTICK_METRICS_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fintick/nms.h"
#include "fintick/ticket.h"

namespace fintick {

/// Per-sample recognition-time cost model:
///   T = alpha * (w + h) + beta * A_text + gamma * A_info + t0
struct TimeModel {
  double alpha = 0.0;  // seconds per pixel of (w + h)
  double beta = 0.0;   // seconds per px^2 of text area
  double gamma = 0.0;  // seconds per px^2 of information area
  double t0 = 0.0;     // fixed per-sample overhead
};

struct TimingObservation {
  double w = 0.0;
  double h = 0.0;
  double a_text = 0.0;
  double a_info = 0.0;
  double elapsed = 0.0;

  void validate() const;  // a_info <= a_text <= w*h, all nonnegative
};

double predict_time(const TimeModel& m, double w, double h, double a_text,
                    double a_info);

struct TimeFit {
  TimeModel model;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares over the cost-model design. Requires at least 4
/// observations and a full-rank design; throws FitError naming the
/// collinear regressors otherwise.
TimeFit fit_time_model(const std::vector<TimingObservation>& observations);

struct GtBox {
  Box box;
  int class_id = 0;
};

/// Average precision at IoU >= 0.5 with greedy score-ordered matching, each
/// ground truth matched at most once, all-point interpolation, macro-
/// averaged over classes present in the ground truth. Empty ground truth
/// yields 0 and sets *warned.
double average_precision_50(const std::vector<ScoredDetection>& dets,
                            const std::vector<GtBox>& gts,
                            bool* warned = nullptr);

/// Fraction of ground-truth boxes matched by a same-class detection at
/// IoU >= the threshold.
double recall_at_iou(const std::vector<ScoredDetection>& dets,
                     const std::vector<GtBox>& gts, double iou_threshold = 0.5);

/// Ground truth for end-to-end evaluation of one ticket.
struct TicketEval {
  std::string source_id;
  struct Field {
    std::string keyword;
    std::string text;
  };
  struct Char {
    std::string glyph;
    Box box;
  };
  std::vector<Field> fields;
  std::vector<Char> chars;
};

/// Fraction of (ticket, field) truth pairs whose assembled text matches
/// exactly. Results and truths are joined on source_id; mismatched id sets
/// raise DataMismatchError listing the offenders.
double field_accuracy(const std::vector<RecognitionResult>& results,
                      const std::vector<TicketEval>& truths);

/// Fraction of truth characters matched by a result character with equal
/// glyph and box IoU >= 0.5.
double character_accuracy(const std::vector<RecognitionResult>& results,
                          const std::vector<TicketEval>& truths);

struct EvalReport {
  int tickets = 0;
  int truth_fields = 0;
  int truth_chars = 0;
  double field_accuracy = 0.0;
  double char_accuracy = 0.0;
  double char_box_ap50 = 0.0;   // detection quality of character boxes
  double char_box_recall = 0.0;
  std::map<std::string, double> per_class_ap;  // keyed by glyph
  bool ap_warning = false;

  std::string to_tsv() const;
  std::string to_json() const;
};

EvalReport evaluate_results(const std::vector<RecognitionResult>& results,
                            const std::vector<TicketEval>& truths);

struct FpsReport {
  double fps = 0.0;
  double mean_seconds = 0.0;
  int runs = 0;
  std::map<std::string, double> mean_stage_seconds;
};

/// Wall-clock throughput of run_one over [0, count) after `warmup` warmup
/// calls (on the first items). run_one returns per-stage timings for the
/// breakdown.
FpsReport measure_fps(
    int count, int warmup,
    const std::function<std::vector<std::pair<std::string, double>>(int)>& run_one);

}  // namespace fintick

#endif  // FINTICK_METRICS_H_
