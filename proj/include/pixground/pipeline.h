// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixground/analysis.h"
#include "pixground/attention.h"
#include "pixground/benchmark.h"
#include "pixground/judge.h"
#include "pixground/masks.h"
#include "pixground/metrics.h"
#include "pixground/perturbation.h"
#include "pixground/render.h"
#include "pixground/run.h"
#include "pixground/selection.h"

namespace pixground {

struct EvaluateOptions {
  Strategy strategy = Strategy::Oracle;
  EvalPolicy policy;
  std::size_t jobs = 1;
  double similarity_threshold = kSimilarityThreshold;
  TournamentConfig tournament;
  // Needed for strategy=auto and for grading free-form (P1) answers.
  JudgeProvider* judge = nullptr;
};

struct SampleEvaluation {
  std::string run_id;
  std::string sample_id;
  Probing probing = Probing::P2;
  bool none_expression = false;
  std::optional<bool> vqa_correct;
  std::optional<std::size_t> parsed_choice;
  std::optional<double> iou;
  std::optional<std::string> chosen_phrase;
  std::vector<AttentionPoint> chosen_points;
  std::size_t n_candidates = 0;
  std::optional<PointSample> point_sample;
  bool direct_masks_present = false;
  std::string error;
};

struct EvaluationReport {
  std::string benchmark;
  Strategy strategy = Strategy::Oracle;
  EvalPolicy policy;
  std::string pick_template;
  nlohmann::json runs = nlohmann::json::array();  // run metadata echo
  ScoreCard scores;
  std::vector<SampleEvaluation> samples;  // ordered by run, then sample_id
  std::vector<std::string> errors;
  std::vector<std::string> notes;

  bool ok() const { return errors.empty(); }
};

// Scores every run against the benchmark. P3 runs give A, P1 runs A_dagger
// (judge-graded) and M_dagger, P2 runs M. Per-sample work runs on
// options.jobs threads; the report does not depend on scheduling.
EvaluationReport evaluate(const Benchmark& benchmark, std::span<const RunManifest> runs,
                          const EvaluateOptions& options);

nlohmann::json report_to_json(const EvaluationReport& report);

// Candidates for one sample of a mined run (attention + recorded segmenter
// masks). Empty when the output has no phrases.
std::vector<CandidateMask> load_candidates(const RunManifest& run, const SampleRunRef& ref,
                                           const OutputRecord& output);

// Image for a sample: the file on disk, or a mid-gray canvas of the mask
// size when `allow_blank` is set and the file is missing.
Image load_sample_image(const Benchmark& benchmark, const Sample& sample, bool allow_blank);

struct AnalyzeOptions {
  EvalPolicy policy;
  std::size_t jobs = 1;
  Categorizer* categorizer = nullptr;  // keyword lexicon when null
  JudgeProvider* judge = nullptr;      // grading for P1 runs
};

struct AnalysisReport {
  std::vector<EmergenceRecord> emergence;
  std::array<std::size_t, 10> location_bins{};
  std::array<std::size_t, kConceptCount> concept_counts{};
  std::optional<FailureQuadrant> quadrants;
  std::vector<std::pair<std::string, LengthStats>> lengths;  // per run
  std::size_t discarded_none = 0;
  std::vector<std::string> errors;
};

AnalysisReport analyze(const Benchmark& benchmark, std::span<const RunManifest> runs,
                       const AnalyzeOptions& options);
nlohmann::json to_json(const AnalysisReport& report);

struct RenderedFile {
  std::filesystem::path path;
  std::string digest;  // FNV-1a of the PNG bytes
};

// One overlay per candidate plus a sheet holding all of them, labeled 1..n.
std::vector<RenderedFile> render_sample(const Benchmark& benchmark, const RunManifest& run,
                                        const std::string& sample_id,
                                        const std::filesystem::path& out_dir,
                                        const OverlayStyle& style = {});

struct ValidationReport {
  std::vector<std::string> errors;
  std::size_t checked = 0;
  bool ok() const { return errors.empty(); }
};

ValidationReport validate_benchmark_file(const std::filesystem::path& path);
// Checks every referenced file; with a benchmark, also sample ids and sizes.
ValidationReport validate_run_file(const std::filesystem::path& path,
                                   const Benchmark* benchmark = nullptr);
nlohmann::json to_json(const ValidationReport& report);

struct PerturbOptions {
  SuiteKind suite = SuiteKind::Vqa;
  SuiteOptions suite_options;
  Rewriter* rewriter = nullptr;  // required for the vqa suite
  bool write_images = true;      // visual suite: edited PNGs next to the manifest
};

// Builds the suite for every sample and writes manifest.json (plus edited
// images) under out_dir. Returns the manifest.
nlohmann::json perturb_benchmark(const Benchmark& benchmark, const PerturbOptions& options,
                                 const std::filesystem::path& out_dir);

}  // namespace pixground
