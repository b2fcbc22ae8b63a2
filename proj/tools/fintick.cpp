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

// Batch front end: corpus synthesis, pipeline execution, evaluation,
// gradient self-checks, and timing benchmarks.
//
// Exit codes: 0 ok, 2 config error, 3 I/O error, 4 data mismatch,
// 5 numeric check failure, 6 fit failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "fintick/config.h"
#include "fintick/errors.h"
#include "fintick/losses.h"
#include "fintick/metrics.h"
#include "fintick/router.h"
#include "fintick/runner.h"
#include "fintick/synth.h"

namespace fs = std::filesystem;
using namespace fintick;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDataMismatch = 4;
constexpr int kExitNumericCheck = 5;
constexpr int kExitFit = 6;

struct GlobalArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> workers;

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_path.empty()
                             ? PipelineConfig{}
                             : PipelineConfig::load_file(config_path);
    if (seed.has_value()) cfg.seed = *seed;
    if (workers.has_value()) cfg.workers = *workers;
    cfg.validate();
    return cfg;
  }
};

CorpusMix parse_mix(const std::string& text) {
  if (text == "default") return CorpusMix{};
  const size_t colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("--mix expects 'default' or 'TYPE1:TYPE2' proportions");
  }
  CorpusMix mix;
  try {
    mix.type_one = std::stod(text.substr(0, colon));
    mix.type_two = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("bad --mix value '" + text + "'");
  }
  if (mix.type_one < 0.0 || mix.type_two < 0.0 ||
      mix.type_one + mix.type_two <= 0.0) {
    throw ConfigError("--mix proportions must be nonnegative and sum > 0");
  }
  return mix;
}

int cmd_synth(const GlobalArgs& global, const std::string& out_dir, int count,
              const std::string& mix_text, const std::string& templates_csv,
              double sigma, int max_translate) {
  const PipelineConfig cfg = global.resolve();
  const TemplateRegistry registry = cfg.load_registry();
  const GlyphSet glyphs = cfg.load_glyphs();

  std::vector<std::string> ids;
  if (!templates_csv.empty()) {
    std::istringstream is(templates_csv);
    std::string item;
    while (std::getline(is, item, ',')) {
      if (!item.empty()) ids.push_back(item);
    }
  }
  const std::vector<PlannedTicket> plan =
      plan_corpus(registry, ids, count, parse_mix(mix_text), cfg.seed, sigma,
                  max_translate);
  generate_corpus(registry, glyphs, plan, out_dir);
  std::cout << "synth: wrote " << plan.size() << " tickets to " << out_dir
            << "\n";
  return kExitOk;
}

int cmd_run(const GlobalArgs& global, const std::string& corpus_dir,
            const std::string& out_path, const std::string& tsv_path,
            const std::string& timings_path) {
  const PipelineConfig cfg = global.resolve();
  const TemplateRegistry registry = cfg.load_registry();
  PipelineModels models = PipelineModels::reference();
  models.detection_glyphs = cfg.load_glyphs();
  models.recognition_glyphs = models.detection_glyphs;

  const std::vector<TicketRunRecord> records =
      run_corpus(corpus_dir, registry, models, cfg.detector, cfg.workers);

  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write results to " + out_path);
  int warnings = 0;
  for (const TicketRunRecord& rec : records) {
    out << result_to_json(rec.run.result) << "\n";
    warnings += rec.run.result.warning ? 1 : 0;
  }
  if (!out) throw IoError("short write to " + out_path);

  if (!tsv_path.empty()) {
    std::ofstream tsv(tsv_path);
    if (!tsv) throw IoError("cannot write " + tsv_path);
    for (const TicketRunRecord& rec : records) {
      tsv << result_to_tsv(rec.run.result);
    }
  }
  if (!timings_path.empty()) {
    std::ofstream timings(timings_path);
    if (!timings) throw IoError("cannot write " + timings_path);
    for (const TicketRunRecord& rec : records) {
      for (const StageTiming& t : rec.run.timings) {
        timings << rec.manifest.id << "\t" << to_string(t.stage) << "\t"
                << t.seconds << "\n";
      }
    }
  }
  std::cout << "run: " << records.size() << " tickets, " << warnings
            << " warnings -> " << out_path << "\n";
  return kExitOk;
}

std::vector<RecognitionResult> read_results_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results " + path);
  std::vector<RecognitionResult> results;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    results.push_back(result_from_json(line));
  }
  return results;
}

int cmd_eval(const std::string& results_path, const std::string& truth_dir,
             const std::string& json_path, const std::string& tsv_path) {
  const std::vector<RecognitionResult> results =
      read_results_file(results_path);
  const std::vector<TicketEval> truths = load_corpus_truth(truth_dir);
  const EvalReport report = evaluate_results(results, truths);

  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw IoError("cannot write " + json_path);
    out << report.to_json() << "\n";
  }
  if (!tsv_path.empty()) {
    std::ofstream out(tsv_path);
    if (!out) throw IoError("cannot write " + tsv_path);
    out << report.to_tsv();
  } else {
    std::cout << report.to_tsv();
  }
  return kExitOk;
}

Box random_positive_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> center(10.0, 90.0);
  std::uniform_real_distribution<double> size(2.0, 40.0);
  return Box::from_center_size(center(rng), center(rng), size(rng), size(rng));
}

int cmd_gradcheck(const GlobalArgs& global, std::string loss_name, int trials,
                  double epsilon, double tolerance, bool inject_error) {
  const PipelineConfig cfg = global.resolve();
  if (loss_name.empty()) loss_name = cfg.gradcheck_loss;
  if (tolerance <= 0.0) throw ConfigError("--tol must be > 0");
  if (trials < 0) throw ConfigError("--trials must be >= 0");
  if (trials == 0) {
    std::cout << "gradcheck: warning: no trials requested\n";
    return kExitOk;
  }

  std::vector<std::pair<std::string, LossKind>> selected;
  const auto add = [&](const std::string& name) {
    if (name == "iou") {
      selected.emplace_back(name, LossKind::kIoU);
    } else if (name == "giou") {
      selected.emplace_back(name, LossKind::kGIoU);
    } else if (name == "ciou") {
      selected.emplace_back(name, LossKind::kCIoU);
    } else if (name == "smooth-l1") {
      selected.emplace_back(name, LossKind::kSmoothL1);
    } else {
      throw ConfigError("unknown loss '" + name + "'");
    }
  };
  if (loss_name == "all") {
    add("smooth-l1");
    add("iou");
    add("giou");
    add("ciou");
  } else {
    add(loss_name);
  }

  bool all_ok = true;
  for (const auto& [name, kind] : selected) {
    std::mt19937_64 rng(cfg.seed);
    double worst = 0.0;
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
      std::array<double, 4> analytic{};
      std::array<double, 4> numeric{};
      if (kind == LossKind::kSmoothL1) {
        std::uniform_real_distribution<double> comp(-3.0, 3.0);
        RegressionTarget a{comp(rng), comp(rng), comp(rng), comp(rng)};
        RegressionTarget b{comp(rng), comp(rng), comp(rng), comp(rng)};
        // Stay clear of the |d| = 1 transition.
        bool near_kink = false;
        const double d[4] = {a.tx - b.tx, a.ty - b.ty, a.tw - b.tw,
                             a.th - b.th};
        for (double di : d) {
          if (std::abs(std::abs(di) - 1.0) < 1e-3) near_kink = true;
        }
        if (near_kink) {
          --t;
          continue;
        }
        analytic = smooth_l1_loss(a, b).gradient;
        numeric = finite_difference_smooth_l1(a, b, epsilon);
      } else {
        const Box gt = random_positive_box(rng);
        const Box pred = random_positive_box(rng);
        if (near_corner_alignment(pred, gt, 1e-3)) {
          --t;
          continue;
        }
        switch (kind) {
          case LossKind::kIoU:
            analytic = iou_loss(pred, gt).gradient;
            break;
          case LossKind::kGIoU:
            analytic = giou_loss(pred, gt).gradient;
            break;
          default:
            analytic = ciou_loss(pred, gt).gradient;
            break;
        }
        numeric = finite_difference_gradient(kind, pred, gt, epsilon);
        if (inject_error) analytic[0] += 1e-2;
        const double rel = gradient_relative_error(analytic, numeric);
        worst = std::max(worst, rel);
        if (rel > tolerance) {
          if (failures == 0) {
            std::cout << "gradcheck " << name << ": mismatch at trial " << t
                      << " rel_err=" << rel << "\n  pred=(" << pred.x_min()
                      << "," << pred.y_min() << "," << pred.x_max() << ","
                      << pred.y_max() << ")\n  gt=(" << gt.x_min() << ","
                      << gt.y_min() << "," << gt.x_max() << "," << gt.y_max()
                      << ")\n";
          }
          ++failures;
        }
        continue;
      }
      if (inject_error) analytic[0] += 1e-2;
      const double rel = gradient_relative_error(analytic, numeric);
      worst = std::max(worst, rel);
      if (rel > tolerance) {
        if (failures == 0) {
          std::cout << "gradcheck " << name << ": mismatch at trial " << t
                    << " rel_err=" << rel << "\n";
        }
        ++failures;
      }
    }
    const bool ok = failures == 0;
    all_ok = all_ok && ok;
    std::cout << "gradcheck " << name << ": " << trials
              << " trials, max rel err " << worst << " -> "
              << (ok ? "PASS" : "FAIL") << "\n";
  }
  return all_ok ? kExitOk : kExitNumericCheck;
}

int cmd_bench(const GlobalArgs& global, const std::string& corpus_dir,
              int warmup, const std::string& json_path) {
  const PipelineConfig cfg = global.resolve();
  const TemplateRegistry registry = cfg.load_registry();
  PipelineModels models = PipelineModels::reference();
  models.detection_glyphs = cfg.load_glyphs();
  models.recognition_glyphs = models.detection_glyphs;

  const std::vector<ManifestEntry> manifest = read_manifest(corpus_dir);
  if (manifest.empty()) throw DataMismatchError("bench: empty corpus");
  for (const ManifestEntry& e : manifest) {
    registry.require(e.template_id);
  }

  // Benchmarks pin a single worker so the per-sample cost model stays
  // identifiable.
  std::vector<RasterImage> images;
  images.reserve(manifest.size());
  for (const ManifestEntry& e : manifest) {
    images.push_back(read_image(corpus_image_path(corpus_dir, e.id)));
  }

  std::vector<double> per_ticket_elapsed(manifest.size(), 0.0);
  const auto run_one = [&](int i) {
    const PipelineRun run = run_pipeline(images[i], manifest[i].template_id,
                                         registry, models, cfg.detector);
    std::vector<std::pair<std::string, double>> stage_times;
    double total = 0.0;
    for (const StageTiming& t : run.timings) {
      stage_times.emplace_back(to_string(t.stage), t.seconds);
      total += t.seconds;
    }
    per_ticket_elapsed[i] = total;
    return stage_times;
  };

  const FpsReport fps = measure_fps(static_cast<int>(manifest.size()), warmup,
                                    run_one);

  std::vector<TimingObservation> observations;
  for (size_t i = 0; i < manifest.size(); ++i) {
    observations.push_back(make_timing_observation(
        registry.require(manifest[i].template_id),
        read_truth(corpus_dir, manifest[i].id), per_ticket_elapsed[i]));
  }
  const TimeFit fit = fit_time_model(observations);

  std::map<std::string, std::pair<int, double>> per_template;
  for (size_t i = 0; i < manifest.size(); ++i) {
    auto& [n, total] = per_template[manifest[i].template_id];
    n += 1;
    total += per_ticket_elapsed[i];
  }

  std::ostringstream tsv;
  tsv << "tickets\t" << manifest.size() << "\n";
  tsv << "fps\t" << fps.fps << "\n";
  tsv << "mean_seconds\t" << fps.mean_seconds << "\n";
  for (const auto& [stage, secs] : fps.mean_stage_seconds) {
    tsv << "stage_mean_seconds\t" << stage << "\t" << secs << "\n";
  }
  for (const auto& [tpl, stats] : per_template) {
    tsv << "template_fps\t" << tpl << "\t"
        << (stats.second > 0.0 ? stats.first / stats.second : 0.0) << "\n";
  }
  tsv << "alpha\t" << fit.model.alpha << "\n";
  tsv << "beta\t" << fit.model.beta << "\n";
  tsv << "gamma\t" << fit.model.gamma << "\n";
  tsv << "t0\t" << fit.model.t0 << "\n";
  tsv << "r_squared\t" << fit.r_squared << "\n";
  std::cout << tsv.str();

  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw IoError("cannot write " + json_path);
    out << "{\n  \"fps\": " << fps.fps << ",\n  \"alpha\": " << fit.model.alpha
        << ",\n  \"beta\": " << fit.model.beta
        << ",\n  \"gamma\": " << fit.model.gamma
        << ",\n  \"t0\": " << fit.model.t0
        << ",\n  \"r_squared\": " << fit.r_squared << "\n}\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fintick: financial ticket recognition pipeline"};
  app.require_subcommand(1);

  GlobalArgs global;
  uint64_t seed_value = 0;
  int workers_value = 0;
  app.add_option("--config", global.config_path, "pipeline configuration file");
  auto* seed_opt = app.add_option("--seed", seed_value, "seed override");
  auto* workers_opt =
      app.add_option("--workers", workers_value, "worker count override");

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::string synth_out, synth_mix = "default", synth_templates;
  int synth_count = 100, synth_translate = 0;
  double synth_sigma = 0.0;
  synth->add_option("--out", synth_out, "output corpus directory")->required();
  synth->add_option("--count", synth_count, "number of tickets");
  synth->add_option("--mix", synth_mix, "'default' or TYPE1:TYPE2 proportions");
  synth->add_option("--templates", synth_templates, "comma-separated ids");
  synth->add_option("--sigma", synth_sigma, "gaussian noise sigma [0,0.1]");
  synth->add_option("--max-translate", synth_translate,
                    "max |translation| in px [0,8]");
  synth->fallthrough();

  auto* run = app.add_subcommand("run", "run the pipeline over a corpus");
  std::string run_corpus_dir, run_out = "results.jsonl", run_tsv, run_timings;
  run->add_option("--corpus", run_corpus_dir, "corpus directory")->required();
  run->add_option("--out", run_out, "results file (JSON lines)");
  run->add_option("--tsv", run_tsv, "also write line-oriented text records");
  run->add_option("--timings", run_timings, "write per-stage timings TSV");
  run->fallthrough();

  auto* eval = app.add_subcommand("eval", "evaluate results against truth");
  std::string eval_results, eval_truth, eval_json, eval_tsv;
  eval->add_option("--results", eval_results, "results JSONL file")->required();
  eval->add_option("--truth", eval_truth, "corpus directory with truth/")
      ->required();
  eval->add_option("--json", eval_json, "write JSON report");
  eval->add_option("--tsv", eval_tsv, "write TSV report (default: stdout)");
  eval->fallthrough();

  auto* gradcheck =
      app.add_subcommand("gradcheck", "verify analytic loss gradients");
  std::string gc_loss;
  int gc_trials = 1000;
  double gc_eps = 1e-6, gc_tol = 1e-4;
  bool gc_inject = false;
  gradcheck->add_option("--loss", gc_loss,
                        "smooth-l1|iou|giou|ciou|all (default from config)");
  gradcheck->add_option("--trials", gc_trials, "number of random pairs");
  gradcheck->add_option("--eps", gc_eps, "central-difference step");
  gradcheck->add_option("--tol", gc_tol, "relative error tolerance");
  gradcheck
      ->add_flag("--inject-gradient-error", gc_inject,
                 "corrupt the analytic gradient (fault-injection hook)")
      ->group("");  // hidden
  gradcheck->fallthrough();

  auto* bench =
      app.add_subcommand("bench", "measure throughput and fit the time model");
  std::string bench_corpus, bench_json;
  int bench_warmup = 3;
  bench->add_option("--corpus", bench_corpus, "corpus directory")->required();
  bench->add_option("--warmup", bench_warmup, "warmup runs");
  bench->add_option("--json", bench_json, "write JSON report");
  bench->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) global.seed = seed_value;
  if (workers_opt->count() > 0) global.workers = workers_value;

  try {
    if (synth->parsed()) {
      return cmd_synth(global, synth_out, synth_count, synth_mix,
                       synth_templates, synth_sigma, synth_translate);
    }
    if (run->parsed()) {
      return cmd_run(global, run_corpus_dir, run_out, run_tsv, run_timings);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_results, eval_truth, eval_json, eval_tsv);
    }
    if (gradcheck->parsed()) {
      return cmd_gradcheck(global, gc_loss, gc_trials, gc_eps, gc_tol,
                           gc_inject);
    }
    if (bench->parsed()) {
      return cmd_bench(global, bench_corpus, bench_warmup, bench_json);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return kExitFit;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DataMismatchError& e) {
    std::cerr << "data mismatch: " << e.what() << "\n";
    return kExitDataMismatch;
  } catch (const PipelineError& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitDataMismatch;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
