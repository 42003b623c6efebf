// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

// Writes a synthetic benchmark plus mock runs and a recorded judge transcript.
//   pixground_synth <dir> [--samples N] [--seed S] [--low-similarity] [--vqa-wrong]

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"synthetic fixture writer"};
  std::string dir;
  pixground::testing::SynthOptions opts;
  bool low_sim = false, vqa_wrong = false, no_transcript = false;
  app.add_option("dir", dir)->required();
  app.add_option("--samples", opts.n_samples);
  app.add_option("--seed", opts.seed);
  app.add_flag("--low-similarity", low_sim, "planted phrases fall below the a+s threshold");
  app.add_flag("--vqa-wrong", vqa_wrong);
  app.add_flag("--no-transcript", no_transcript);
  CLI11_PARSE(app, argc, argv);
  if (low_sim) opts.planted_similarity = 0.5;
  opts.vqa_correct = !vqa_wrong;
  try {
    const auto ds = pixground::testing::make_synthetic(opts);
    const auto paths = pixground::testing::write_synthetic(ds, dir);
    if (!no_transcript) pixground::testing::record_judge_transcript(ds, paths);
    std::cout << paths.benchmark.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "pixground_synth: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
