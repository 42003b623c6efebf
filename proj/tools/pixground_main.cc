// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

// pixground: evaluate / perturb / analyze / render / validate.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pixground/analysis.h"
#include "pixground/error.h"
#include "pixground/judge.h"
#include "pixground/pipeline.h"

namespace fs = std::filesystem;
using namespace pixground;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSampleErrors = 1;
constexpr int kExitFatal = 2;

struct JudgeSetup {
  std::unique_ptr<TranscriptJudgeProvider> provider;
};

// Judge from the config file. The transcript mode comes from the flag, then
// JUDGE_TRANSCRIPT_MODE, then replay when a transcript exists, else live.
JudgeSetup make_judge(const std::optional<ClientConfig>& config, const std::string& mode_flag) {
  JudgeSetup js;
  if (!config || !config->judge) return js;
  const EndpointConfig ep = *config->judge;
  const TranscriptMode fallback =
      !ep.transcript.empty() && fs::exists(ep.transcript) ? TranscriptMode::Replay
                                                          : TranscriptMode::Live;
  const TranscriptMode mode =
      mode_flag.empty() ? transcript_mode_from_env(fallback) : parse_transcript_mode(mode_flag);
  std::function<std::shared_ptr<JudgeBackend>()> live;
  if (!ep.endpoint.empty()) {
    live = [ep] {
      return std::make_shared<HttpJudgeBackend>(ep.endpoint, ep.model, ep.token());
    };
  }
  js.provider = std::make_unique<TranscriptJudgeProvider>(mode, ep.transcript, live);
  return js;
}

std::shared_ptr<CachingTextClient> make_text_client(const EndpointConfig& ep) {
  std::shared_ptr<TextClient> inner;
  if (!ep.endpoint.empty()) {
    inner = std::make_shared<HttpTextClient>(ep.endpoint, ep.model, ep.token());
  }
  return std::make_shared<CachingTextClient>(inner, ep.model, ep.transcript);
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
  if (!out) throw Error("cannot write " + p.string());
}

std::vector<RunManifest> load_runs(const std::vector<std::string>& paths) {
  std::vector<RunManifest> runs;
  for (const auto& p : paths) runs.push_back(load_run_manifest(p));
  return runs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pixel-grounding evaluation toolkit"};
  app.require_subcommand(1);

  std::string benchmark_path, out_path, config_path, transcript_mode;
  std::vector<std::string> run_paths;
  std::size_t jobs = 1;

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score runs against a benchmark");
  std::string strategy = "oracle", probing;
  EvaluateOptions eopts;
  ev->add_option("--benchmark", benchmark_path, "benchmark annotation JSON")->required();
  ev->add_option("--run", run_paths, "run manifest (repeatable, one per probing)")->required();
  ev->add_option("--strategy", strategy, "oracle | a+s | auto")
      ->check(CLI::IsMember({"oracle", "a+s", "auto"}));
  ev->add_option("--probing", probing, "expected probing of the run(s): p1 | p2 | p3");
  ev->add_flag("--exclude-none", eopts.policy.exclude_none_expressions,
               "headline mIoU drops \"None\" samples");
  ev->add_option("--failure-iou", eopts.policy.failure_iou_threshold, "grounding failure threshold");
  ev->add_option("--threshold", eopts.similarity_threshold, "a+s similarity threshold");
  ev->add_option("--group-size", eopts.tournament.group_size, "tournament group size");
  ev->add_option("--config", config_path, "client config JSON (judge endpoint / transcript)");
  ev->add_option("--transcript-mode", transcript_mode, "record | replay | live");
  ev->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  ev->add_option("--out", out_path, "report JSON")->required();

  // perturb
  auto* pt = app.add_subcommand("perturb", "generate prompt-sensitivity variations");
  std::string suite = "vqa", modality = "mask", rewriter_kind = "echo";
  PerturbOptions popts;
  bool no_images = false;
  pt->add_option("--benchmark", benchmark_path)->required();
  pt->add_option("--suite", suite, "vqa | visual | grounding")
      ->check(CLI::IsMember({"vqa", "visual", "grounding"}));
  pt->add_option("--seed", popts.suite_options.seed);
  pt->add_option("--n-sites", popts.suite_options.n_sites, "spelling edits per region");
  pt->add_option("--modality", modality, "grounding wording: mask | box")
      ->check(CLI::IsMember({"mask", "box"}));
  pt->add_option("--rewriter", rewriter_kind, "echo | config")
      ->check(CLI::IsMember({"echo", "config"}));
  pt->add_option("--config", config_path);
  pt->add_flag("--no-images", no_images, "skip writing edited images");
  pt->add_option("--out", out_path, "output directory")->required();

  // analyze
  auto* an = app.add_subcommand("analyze", "emergence, failure quadrants, output lengths");
  AnalyzeOptions aopts;
  an->add_option("--benchmark", benchmark_path)->required();
  an->add_option("--run", run_paths)->required();
  an->add_option("--config", config_path, "categorizer / judge config");
  an->add_option("--transcript-mode", transcript_mode);
  an->add_option("--failure-iou", aopts.policy.failure_iou_threshold);
  an->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  an->add_option("--out", out_path, "output directory")->required();

  // render
  auto* rd = app.add_subcommand("render", "candidate overlays and selection sheet");
  std::string sample_id;
  rd->add_option("--benchmark", benchmark_path)->required();
  rd->add_option("--run", run_paths)->required()->expected(1);
  rd->add_option("--sample-id", sample_id)->required();
  rd->add_option("--out", out_path, "output directory")->required();

  // validate
  auto* va = app.add_subcommand("validate", "schema and invariant audit");
  va->add_option("--benchmark", benchmark_path);
  va->add_option("--run", run_paths)->expected(0, 1);
  va->add_option("--out", out_path, "report JSON (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<ClientConfig> config;
    if (!config_path.empty()) config = ClientConfig::load(config_path);

    if (*ev) {
      const Benchmark bench = load_benchmark(benchmark_path);
      const std::vector<RunManifest> runs = load_runs(run_paths);
      if (!probing.empty()) {
        const Probing want = parse_probing(probing);
        for (const auto& r : runs) {
          if (r.probing != want) {
            throw InvalidArgument("run " + r.run_id + " was captured with probing " +
                                  to_string(r.probing) + ", not " + to_string(want));
          }
        }
      }
      eopts.strategy = parse_strategy(strategy);
      eopts.jobs = jobs;
      JudgeSetup js = make_judge(config, transcript_mode);
      eopts.judge = js.provider.get();
      const EvaluationReport rep = evaluate(bench, runs, eopts);
      if (js.provider) js.provider->finish();
      write_json_file(report_to_json(rep), out_path);
      for (const auto& e : rep.errors) std::cerr << "error: " << e << '\n';
      for (const auto& n : rep.notes) std::cerr << "note: " << n << '\n';
      if (!rep.ok()) {
        std::cerr << rep.errors.size() << " sample error(s); report written to " << out_path
                  << '\n';
        return kExitSampleErrors;
      }
      return kExitOk;
    }

    if (*pt) {
      const Benchmark bench = load_benchmark(benchmark_path);
      popts.suite = parse_suite_kind(suite);
      popts.suite_options.modality = modality == "box" ? prompts::GroundingModality::Box
                                                       : prompts::GroundingModality::Mask;
      popts.write_images = !no_images;
      EchoRewriter echo;
      std::shared_ptr<CachingTextClient> text;
      std::unique_ptr<TextRewriter> model_rewriter;
      if (rewriter_kind == "config") {
        if (!config || (!config->rewriter && !config->echo_rewriter)) {
          throw InvalidArgument("--rewriter config needs a \"rewriter\" entry in --config");
        }
        if (config->rewriter) {
          text = make_text_client(*config->rewriter);
          model_rewriter = std::make_unique<TextRewriter>(text);
        }
      }
      popts.rewriter = model_rewriter ? static_cast<Rewriter*>(model_rewriter.get()) : &echo;
      const nlohmann::json manifest = perturb_benchmark(bench, popts, out_path);
      if (text) text->save();
      std::size_t skipped = 0;
      for (const auto& s : manifest.at("samples")) skipped += s.contains("skipped") ? 1 : 0;
      std::cerr << manifest.at("samples").size() << " samples, " << skipped << " skipped\n";
      return kExitOk;
    }

    if (*an) {
      const Benchmark bench = load_benchmark(benchmark_path);
      const std::vector<RunManifest> runs = load_runs(run_paths);
      std::shared_ptr<CachingTextClient> text;
      std::unique_ptr<ModelCategorizer> model_cat;
      if (config && config->categorizer) {
        text = make_text_client(*config->categorizer);
        model_cat = std::make_unique<ModelCategorizer>(text, true);
        aopts.categorizer = model_cat.get();
      }
      JudgeSetup js = make_judge(config, transcript_mode);
      aopts.judge = js.provider.get();
      aopts.jobs = jobs;
      const AnalysisReport rep = analyze(bench, runs, aopts);
      if (js.provider) js.provider->finish();
      if (text) text->save();
      fs::create_directories(out_path);
      const fs::path dir = out_path;
      write_json_file(to_json(rep), dir / "analysis.json");
      write_text(dir / "location_histogram.csv", histogram_csv(rep.location_bins));
      write_text(dir / "emergence.csv", emergence_csv(rep.emergence));
      std::string concepts = "concept,count\n";
      for (Concept c : all_concepts()) {
        concepts += to_string(c) + "," +
                    std::to_string(rep.concept_counts[static_cast<std::size_t>(c)]) + "\n";
      }
      write_text(dir / "concepts.csv", concepts);
      for (const auto& e : rep.errors) std::cerr << "error: " << e << '\n';
      return rep.errors.empty() ? kExitOk : kExitSampleErrors;
    }

    if (*rd) {
      const Benchmark bench = load_benchmark(benchmark_path);
      const RunManifest run = load_run_manifest(run_paths.front());
      const auto files = render_sample(bench, run, sample_id, out_path);
      for (const auto& f : files) std::cout << f.digest << "  " << f.path.string() << '\n';
      return kExitOk;
    }

    if (*va) {
      if (benchmark_path.empty() && run_paths.empty()) {
        throw InvalidArgument("validate needs --benchmark and/or --run");
      }
      nlohmann::json out = nlohmann::json::object();
      bool ok = true;
      std::optional<Benchmark> bench;
      if (!benchmark_path.empty()) {
        const ValidationReport r = validate_benchmark_file(benchmark_path);
        out["benchmark"] = to_json(r);
        ok = ok && r.ok();
        if (r.ok()) bench = load_benchmark(benchmark_path);
      }
      if (!run_paths.empty()) {
        const ValidationReport r =
            validate_run_file(run_paths.front(), bench ? &*bench : nullptr);
        out["run"] = to_json(r);
        ok = ok && r.ok();
      }
      out["ok"] = ok;
      if (out_path.empty()) {
        std::cout << out.dump(1) << '\n';
      } else {
        write_json_file(out, out_path);
      }
      if (!ok) {
        for (const auto& section : {"benchmark", "run"}) {
          if (!out.contains(section)) continue;
          for (const auto& e : out[section]["errors"]) {
            std::cerr << "error: " << e.get<std::string>() << '\n';
          }
        }
      }
      return ok ? kExitOk : kExitSampleErrors;
    }
  } catch (const std::exception& e) {
    std::cerr << "pixground: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitFatal;
}
