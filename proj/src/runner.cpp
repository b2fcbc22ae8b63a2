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

#include "fintick/runner.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "fintick/errors.h"

namespace fintick {

std::vector<TicketRunRecord> run_corpus(const std::string& corpus_dir,
                                        const TemplateRegistry& registry,
                                        const PipelineModels& models,
                                        const DetectorConfig& config,
                                        int workers) {
  if (workers < 1) throw std::invalid_argument("run_corpus: workers < 1");
  const std::vector<ManifestEntry> manifest = read_manifest(corpus_dir);

  std::vector<std::string> offenders;
  for (const ManifestEntry& e : manifest) {
    if (registry.find(e.template_id) == nullptr &&
        std::find(offenders.begin(), offenders.end(), e.template_id) ==
            offenders.end()) {
      offenders.push_back(e.template_id);
    }
  }
  if (!offenders.empty()) {
    std::ostringstream os;
    os << "unregistered templates in corpus:";
    for (const std::string& id : offenders) os << " " << id;
    throw DataMismatchError(os.str());
  }

  std::vector<TicketRunRecord> records(manifest.size());
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= manifest.size()) return;
      try {
        const ManifestEntry& entry = manifest[i];
        const RasterImage image =
            read_image(corpus_image_path(corpus_dir, entry.id));
        PipelineRun run = run_pipeline(image, entry.template_id, registry,
                                       models, config);
        run.result.source_id = entry.id;
        records[i] = {entry, std::move(run)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1 || manifest.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(manifest.size()));
    pool.reserve(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::sort(records.begin(), records.end(),
            [](const TicketRunRecord& a, const TicketRunRecord& b) {
              return a.manifest.id < b.manifest.id;
            });
  return records;
}

std::vector<TicketEval> load_corpus_truth(const std::string& corpus_dir) {
  std::vector<TicketEval> evals;
  for (const ManifestEntry& entry : read_manifest(corpus_dir)) {
    TicketEval eval;
    eval.source_id = entry.id;
    const std::vector<GroundTruthChar> rows = read_truth(corpus_dir, entry.id);
    for (const GroundTruthField& f : group_truth_fields(rows)) {
      eval.fields.push_back({f.keyword, f.text()});
    }
    for (const GroundTruthChar& row : rows) {
      eval.chars.push_back({row.glyph, row.box});
    }
    evals.push_back(std::move(eval));
  }
  return evals;
}

TimingObservation make_timing_observation(
    const TicketTemplate& tpl, const std::vector<GroundTruthChar>& truth_rows,
    double elapsed_seconds) {
  TimingObservation obs;
  obs.w = tpl.width;
  obs.h = tpl.height;
  for (const GroundTruthChar& row : truth_rows) {
    obs.a_info += row.box.area();
  }
  obs.a_text = obs.a_info;
  for (const TemplateField& field : tpl.fields) {
    obs.a_text += field.label_box.area();
  }
  obs.elapsed = elapsed_seconds;
  obs.validate();
  return obs;
}

}  // namespace fintick
