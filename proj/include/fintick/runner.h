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

#ifndef FINTICK_RUNNER_H_
#define FINTICK_RUNNER_H_

#include <string>
#include <vector>

#include "fintick/metrics.h"
#include "fintick/router.h"
#include "fintick/synth.h"
#include "fintick/template_registry.h"

namespace fintick {

struct TicketRunRecord {
  ManifestEntry manifest;
  PipelineRun run;
};

/// Processes every corpus ticket through its pipeline. Manifest templates
/// are checked up front (DataMismatchError lists the offenders). Tickets
/// are distributed over `workers` threads; output order is normalized by
/// source id, so the worker count never changes the result content.
std::vector<TicketRunRecord> run_corpus(const std::string& corpus_dir,
                                        const TemplateRegistry& registry,
                                        const PipelineModels& models,
                                        const DetectorConfig& config,
                                        int workers);

/// Ground truth of a corpus in evaluation form.
std::vector<TicketEval> load_corpus_truth(const std::string& corpus_dir);

/// Eq.-style geometry regressors for one ticket: the information area is
/// the total planted character box area; the text area adds the printed
/// label/prefix boxes.
TimingObservation make_timing_observation(const TicketTemplate& tpl,
                                          const std::vector<GroundTruthChar>& truth_rows,
                                          double elapsed_seconds);

}  // namespace fintick

#endif  // FINTICK_RUNNER_H_
