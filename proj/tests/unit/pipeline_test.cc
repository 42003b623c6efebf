// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

// End to end over the synthetic mock runs.

#include <fstream>

#include <gtest/gtest.h>

#include "helpers.h"
#include "pixground/attention_file.h"
#include "pixground/pipeline.h"
#include "synthetic.h"

namespace pixground {
namespace {

using testing::SynthDataset;
using testing::SynthOptions;
using testing::SynthPaths;

struct Fixture {
  testing::TempDir dir{"pipeline"};
  SynthDataset ds;
  SynthPaths paths;
  Benchmark benchmark;
  std::vector<RunManifest> runs;

  explicit Fixture(const SynthOptions& opts = {}, bool transcript = true) {
    ds = testing::make_synthetic(opts);
    paths = testing::write_synthetic(ds, dir.path());
    if (transcript) testing::record_judge_transcript(ds, paths);
    benchmark = load_benchmark(paths.benchmark);
    for (const auto& p : {paths.run_p1, paths.run_p2, paths.run_p3}) {
      runs.push_back(load_run_manifest(p));
    }
  }

  std::size_t count_none() const {
    std::size_t n = 0;
    for (const auto& s : ds.samples) n += s.sample.is_none_expression();
    return n;
  }
};

TEST(Evaluate, OracleOnPlantedRunsIsPerfect) {
  Fixture f;
  ASSERT_GT(f.count_none(), 0u);
  EvaluateOptions o;
  TranscriptJudgeProvider judge(TranscriptMode::Replay, f.paths.transcript, nullptr);
  o.judge = &judge;
  const auto rep = evaluate(f.benchmark, f.runs, o);
  ASSERT_TRUE(rep.ok()) << rep.errors.front();
  EXPECT_DOUBLE_EQ(*rep.scores.a, 100.0);
  EXPECT_DOUBLE_EQ(*rep.scores.a_dagger, 100.0);
  EXPECT_DOUBLE_EQ(*rep.scores.m, 100.0);
  EXPECT_DOUBLE_EQ(*rep.scores.m_excluding, 100.0);
  EXPECT_DOUBLE_EQ(*rep.scores.s, 100.0);
  EXPECT_DOUBLE_EQ(*rep.scores.point_accuracy, 100.0);
  EXPECT_EQ(rep.samples.size(), 3 * f.ds.samples.size());
}

TEST(Evaluate, AutoReplayIndependentOfJobs) {
  Fixture f;
  std::string first;
  for (std::size_t jobs : {1, 4}) {
    TranscriptJudgeProvider judge(TranscriptMode::Replay, f.paths.transcript, nullptr);
    EvaluateOptions o;
    o.strategy = Strategy::Automatic;
    o.jobs = jobs;
    o.judge = &judge;
    const auto rep = evaluate(f.benchmark, f.runs, o);
    ASSERT_TRUE(rep.ok()) << rep.errors.front();
    EXPECT_DOUBLE_EQ(*rep.scores.m, 100.0);
    const std::string dump = report_to_json(rep).dump();
    if (first.empty()) {
      first = dump;
    } else {
      EXPECT_EQ(dump, first);
    }
  }
}

TEST(Evaluate, AttendSegmentBelowThreshold) {
  SynthOptions opts;
  opts.planted_similarity = 0.5;
  Fixture f(opts, false);
  EvaluateOptions o;
  o.strategy = Strategy::AttendSegment;
  const std::vector<RunManifest> p2 = {f.runs[1]};
  const auto rep = evaluate(f.benchmark, p2, o);
  ASSERT_TRUE(rep.ok());
  EXPECT_DOUBLE_EQ(*rep.scores.m_excluding, 0.0);
  // Only "None" samples score, each with an empty prediction.
  EXPECT_NEAR(*rep.scores.m,
              100.0 * static_cast<double>(f.count_none()) /
                  static_cast<double>(f.ds.samples.size()),
              1e-9);

  opts.planted_similarity = 0.9;
  Fixture g(opts, false);
  const std::vector<RunManifest> g2 = {g.runs[1]};
  EXPECT_DOUBLE_EQ(*evaluate(g.benchmark, g2, o).scores.m, 100.0);
}

TEST(Evaluate, WrongAnswers) {
  SynthOptions opts;
  opts.vqa_correct = false;
  Fixture f(opts, false);
  EvaluateOptions o;
  const std::vector<RunManifest> p3 = {f.runs[2]};
  const auto rep = evaluate(f.benchmark, p3, o);
  EXPECT_DOUBLE_EQ(*rep.scores.a, 0.0);
  EXPECT_FALSE(rep.scores.m);
}

TEST(Evaluate, AutoWithoutJudgeFails) {
  Fixture f({}, false);
  EvaluateOptions o;
  o.strategy = Strategy::Automatic;
  const std::vector<RunManifest> p2 = {f.runs[1]};
  EXPECT_THROW(evaluate(f.benchmark, p2, o), InvalidArgument);
}

TEST(Analyze, EmergenceAndHistogram) {
  Fixture f;
  AnalyzeOptions o;
  TranscriptJudgeProvider judge(TranscriptMode::Replay, f.paths.transcript, nullptr);
  o.judge = &judge;
  const auto rep = analyze(f.benchmark, f.runs, o);
  ASSERT_TRUE(rep.errors.empty()) << rep.errors.front();
  std::size_t objects = 0;
  for (const auto& s : f.ds.samples) {
    if (!s.sample.is_none_expression()) objects += s.sample.gt_masks.size();
  }
  // One record per object, from the grounding run (P2 over P1).
  EXPECT_EQ(rep.emergence.size(), objects);
  EXPECT_EQ(rep.discarded_none, f.count_none());
  std::size_t binned = 0, labelled = 0;
  for (auto b : rep.location_bins) binned += b;
  for (auto c : rep.concept_counts) labelled += c;
  EXPECT_EQ(binned, rep.emergence.size());
  EXPECT_EQ(labelled, rep.emergence.size());
  for (const auto& r : rep.emergence) EXPECT_DOUBLE_EQ(r.iou, 1.0);
  ASSERT_TRUE(rep.quadrants);
  EXPECT_EQ(rep.quadrants->both_success, rep.quadrants->total());
  EXPECT_EQ(rep.lengths.size(), 3u);
}

TEST(Perturb, ManifestCounts) {
  Fixture f({}, false);
  EchoRewriter echo;
  PerturbOptions o;
  o.rewriter = &echo;
  testing::TempDir out("perturb");
  auto m = perturb_benchmark(f.benchmark, o, out.path() / "vqa");
  ASSERT_EQ(m.at("samples").size(), f.ds.samples.size());
  for (const auto& s : m.at("samples")) EXPECT_EQ(s.at("items").size(), 30u);

  o.suite = SuiteKind::Visual;
  m = perturb_benchmark(f.benchmark, o, out.path() / "visual");
  std::size_t skipped = 0, pngs = 0;
  for (const auto& s : m.at("samples")) {
    if (s.contains("skipped")) {
      ++skipped;
      continue;
    }
    EXPECT_EQ(s.at("items").size(), 8u);
    for (const auto& it : s.at("items")) {
      ASSERT_TRUE(it.contains("image"));
      pngs += std::filesystem::exists(out.path() / "visual" / it.at("image").get<std::string>());
    }
  }
  EXPECT_EQ(skipped, f.count_none());
  EXPECT_EQ(pngs, 8 * (f.ds.samples.size() - skipped));

  o.suite = SuiteKind::GroundingLanguage;
  m = perturb_benchmark(f.benchmark, o, out.path() / "grounding");
  for (const auto& s : m.at("samples")) {
    if (!s.contains("skipped")) EXPECT_EQ(s.at("items").size(), 12u);
  }
  o.suite = SuiteKind::Vqa;
  o.rewriter = nullptr;
  EXPECT_THROW(perturb_benchmark(f.benchmark, o, out.path() / "x"), InvalidArgument);
}

TEST(Validate, CleanAndCorrupted) {
  Fixture f({}, false);
  EXPECT_TRUE(validate_benchmark_file(f.paths.benchmark).ok());
  EXPECT_TRUE(validate_run_file(f.paths.run_p2, &f.benchmark).ok());

  // Corrupt one RLE count so the runs no longer sum to h*w.
  const auto& ref = f.runs[1].samples.front();
  const auto masks_path = f.runs[1].resolve(ref.masks);
  auto doc = read_json_file(masks_path);
  auto& counts = doc.at("prompts").at(0).at("masks").at(0).at("counts");
  counts[0] = counts[0].get<std::uint64_t>() + 1;
  write_json_file(doc, masks_path);
  auto rep = validate_run_file(f.paths.run_p2, &f.benchmark);
  ASSERT_FALSE(rep.ok());
  EXPECT_NE(rep.errors.front().find(ref.sample_id), std::string::npos) << rep.errors.front();

  // Truncate an attention file.
  const auto att_path = f.runs[1].resolve(f.runs[1].samples[1].attention);
  const auto size = std::filesystem::file_size(att_path);
  std::filesystem::resize_file(att_path, size - 3);
  rep = validate_run_file(f.paths.run_p2, &f.benchmark);
  bool truncated = false;
  for (const auto& e : rep.errors) truncated |= e.find("truncated") != std::string::npos;
  EXPECT_TRUE(truncated);

  std::ofstream(f.dir.path() / "bad.json") << "{\"samples\": 3}";
  EXPECT_FALSE(validate_benchmark_file(f.dir.path() / "bad.json").ok());
}

TEST(Render, OneFilePerCandidatePlusSheet) {
  Fixture f({}, false);
  const auto& run = f.runs[1];
  const auto& ref = run.samples.front();
  const auto output = load_output_record(run.resolve(ref.output));
  const auto cands = load_candidates(run, ref, output);
  ASSERT_GT(cands.size(), 1u);
  testing::TempDir out("render");
  const auto files = render_sample(f.benchmark, run, ref.sample_id, out.path());
  ASSERT_EQ(files.size(), cands.size() + 1);
  std::set<std::string> digests;
  for (const auto& r : files) {
    EXPECT_TRUE(std::filesystem::exists(r.path));
    digests.insert(r.digest);
  }
  EXPECT_EQ(digests.size(), files.size());
  const Image sheet = load_image(files.back().path);
  EXPECT_GT(sheet.width(), cands.size() * f.ds.options.width);
  EXPECT_THROW(render_sample(f.benchmark, run, "missing", out.path()), Error);
}

}  // namespace
}  // namespace pixground
