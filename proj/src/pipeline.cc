// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/pipeline.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <thread>

#include "pixground/attention_file.h"
#include "pixground/error.h"
#include "pixground/image.h"
#include "pixground/prompts.h"
#include "pixground/text.h"

namespace pixground {
namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

std::string to_string(MaskSource s) { return s == MaskSource::Direct ? "direct" : "mined"; }

MaskRLE gt_union_for(const Sample& sample, MaskSize size) {
  if (sample.gt_masks.empty()) return MaskRLE::empty(size);
  MaskRLE u = mask_union(sample.gt_masks);
  if (u.size != size) {
    throw SchemaError("gt mask size " + std::to_string(u.size.height) + "x" +
                      std::to_string(u.size.width) + " differs from run image size " +
                      std::to_string(size.height) + "x" + std::to_string(size.width));
  }
  return u;
}

bool per_expression_scores(const Sample& sample, std::span<const PhraseSpan> phrases) {
  if (sample.expressions.size() < 2 || phrases.empty()) return false;
  return std::all_of(phrases.begin(), phrases.end(), [&](const PhraseSpan& p) {
    return p.similarities.size() >= sample.expressions.size();
  });
}

struct Context {
  const Benchmark& benchmark;
  const EvaluateOptions& options;
};

SelectionResult select(const Context& ctx, const RunManifest& run, const Sample& sample,
                       const OutputRecord& output, std::span<const CandidateMask> cands) {
  const auto& opts = ctx.options;
  switch (opts.strategy) {
    case Strategy::Oracle:
      return oracle_select(cands, sample.gt_masks, true);
    case Strategy::AttendSegment: {
      if (!per_expression_scores(sample, output.phrase_spans)) {
        return attend_segment_select(output.phrase_spans, cands, opts.similarity_threshold);
      }
      std::vector<SelectionResult> parts;
      for (std::size_t e = 0; e < sample.expressions.size(); ++e) {
        parts.push_back(
            attend_segment_select(output.phrase_spans, cands, opts.similarity_threshold, e));
      }
      return combine_results(Strategy::AttendSegment, parts);
    }
    case Strategy::Automatic: {
      const Image image = load_sample_image(ctx.benchmark, sample, false);
      auto judge = opts.judge->open(run.run_id + "/" + sample.sample_id + "/select");
      std::vector<SelectionResult> parts;
      for (const auto& expr : sample.expressions) {
        parts.push_back(automatic_select(cands, *judge, expr, image, opts.tournament));
      }
      return parts.size() == 1 ? parts.front() : combine_results(Strategy::Automatic, parts);
    }
  }
  throw InvalidArgument("unknown strategy");
}

SampleEvaluation evaluate_one(const Context& ctx, const RunManifest& run, const Sample& sample,
                              const SampleRunRef& ref) {
  SampleEvaluation ev;
  ev.run_id = run.run_id;
  ev.sample_id = sample.sample_id;
  ev.probing = run.probing;
  ev.none_expression = sample.is_none_expression();

  const OutputRecord output = load_output_record(run.resolve(ref.output));
  validate_output(output);
  const MaskSize size = run.image_size_for(ref);

  if (run.probing == Probing::P3) {
    ev.parsed_choice = parse_option_letter(output.text, sample.choices);
    const auto answer = sample.answer_index();
    ev.vqa_correct = ev.parsed_choice && answer && *ev.parsed_choice == *answer;
    return ev;
  }
  if (run.probing == Probing::P1 && ctx.options.judge) {
    auto judge = ctx.options.judge->open(run.run_id + "/" + sample.sample_id + "/grade");
    ev.vqa_correct = grade_with_judge(sample.question, sample.answer, output.text, *judge);
  }

  const MaskRLE gt = gt_union_for(sample, size);
  if (run.mask_source == MaskSource::Direct) {
    MaskRLE pred = MaskRLE::empty(size);
    if (!ref.masks.empty()) {
      const SampleMasks masks = load_sample_masks(run.resolve(ref.masks));
      if (!masks.direct_masks.empty()) {
        ev.direct_masks_present = true;
        pred = mask_union(masks.direct_masks);
        if (pred.size != size) throw SchemaError("direct mask size differs from image size");
      }
    }
    ev.iou = iou(pred, gt);
    return ev;
  }

  const std::vector<CandidateMask> cands = load_candidates(run, ref, output);
  ev.n_candidates = cands.size();
  const SelectionResult sel = select(ctx, run, sample, output, cands);
  ev.chosen_phrase = sel.chosen_phrase_text;
  PointSample ps{{}, gt, ev.none_expression};
  for (const auto& c : sel.chosen) {
    ev.chosen_points.push_back(c.point);
    ps.points.emplace_back(c.point.image_x, c.point.image_y);
  }
  ev.point_sample = std::move(ps);
  ev.iou = iou(sel.predicted_mask(size), gt);
  return ev;
}

void check_options(std::span<const RunManifest> runs, const EvaluateOptions& options) {
  options.policy.validate();
  if (options.strategy == Strategy::Automatic && !options.judge) {
    throw InvalidArgument("strategy auto needs a judge (configure one with --config)");
  }
  std::set<Probing> seen;
  for (const auto& r : runs) {
    if (!seen.insert(r.probing).second) {
      throw InvalidArgument("more than one run with probing " + to_string(r.probing));
    }
  }
}

}  // namespace

Image load_sample_image(const Benchmark& benchmark, const Sample& sample, bool allow_blank) {
  const std::filesystem::path p = benchmark.root / sample.image_path;
  if (!sample.image_path.empty() && std::filesystem::exists(p)) return load_image(p);
  if (!allow_blank) throw Error("image not found for sample " + sample.sample_id + ": " + p.string());
  const auto size = sample.mask_size();
  if (!size) throw Error("no image and no mask size for sample " + sample.sample_id);
  return Image(size->width, size->height, Rgb{128, 128, 128});
}

std::vector<CandidateMask> load_candidates(const RunManifest& run, const SampleRunRef& ref,
                                           const OutputRecord& output) {
  if (output.phrase_spans.empty()) return {};
  if (ref.attention.empty()) throw SchemaError("mined run sample without an attention file");
  if (ref.masks.empty()) throw SchemaError("mined run sample without a masks file");
  const AttentionRun att = read_attention_file(run.resolve(ref.attention));
  if (att.rows != run.grid_h || att.cols != run.grid_w) {
    throw SchemaError("attention grid " + std::to_string(att.rows) + "x" +
                      std::to_string(att.cols) + " differs from run grid " +
                      std::to_string(run.grid_h) + "x" + std::to_string(run.grid_w));
  }
  if (att.n_tokens() != output.n_tokens()) {
    throw SchemaError("attention holds " + std::to_string(att.n_tokens()) + " tokens, output " +
                      std::to_string(output.n_tokens()));
  }
  const NormalizedAttention norm = normalize_across_outputs(att.grids);
  const SampleMasks masks = load_sample_masks(run.resolve(ref.masks));
  PromptMaskProvider provider(masks);
  return mine_candidates(norm, output.phrase_spans, provider, run.image_size_for(ref));
}

EvaluationReport evaluate(const Benchmark& benchmark, std::span<const RunManifest> runs,
                          const EvaluateOptions& options) {
  check_options(runs, options);
  EvaluationReport rep;
  rep.benchmark = benchmark.name;
  rep.strategy = options.strategy;
  rep.policy = options.policy;
  rep.pick_template = options.tournament.pick_template;
  rep.scores.n_samples = benchmark.samples.size();

  struct Item {
    std::size_t run;
    const Sample* sample;
    const SampleRunRef* ref;
  };
  std::vector<Item> items;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const RunManifest& run = runs[r];
    rep.runs.push_back({{"run_id", run.run_id},
                        {"model_name", run.model_name},
                        {"probing", to_string(run.probing)},
                        {"mask_source", to_string(run.mask_source)}});
    std::vector<Item> mine;
    for (const auto& s : benchmark.samples) {
      const SampleRunRef* ref = run.find(s.sample_id);
      if (!ref) {
        rep.errors.push_back(run.run_id + "/" + s.sample_id + ": sample missing from run");
        continue;
      }
      mine.push_back({r, &s, ref});
    }
    for (const auto& ref : run.samples) {
      if (!benchmark.find(ref.sample_id)) {
        rep.errors.push_back(run.run_id + "/" + ref.sample_id + ": not in benchmark");
      }
    }
    std::sort(mine.begin(), mine.end(), [](const Item& a, const Item& b) {
      return a.sample->sample_id < b.sample->sample_id;
    });
    items.insert(items.end(), mine.begin(), mine.end());
  }

  const Context ctx{benchmark, options};
  rep.samples.resize(items.size());
  parallel_for(items.size(), options.jobs, [&](std::size_t i) {
    const Item& it = items[i];
    try {
      rep.samples[i] = evaluate_one(ctx, runs[it.run], *it.sample, *it.ref);
    } catch (const std::exception& e) {
      SampleEvaluation ev;
      ev.run_id = runs[it.run].run_id;
      ev.sample_id = it.sample->sample_id;
      ev.probing = runs[it.run].probing;
      ev.none_expression = it.sample->is_none_expression();
      ev.error = e.what();
      rep.samples[i] = std::move(ev);
    }
  });
  for (const auto& s : rep.samples) {
    if (!s.error.empty()) rep.errors.push_back(s.run_id + "/" + s.sample_id + ": " + s.error);
  }

  std::optional<double> point_acc_p1, point_acc_p2;
  for (const auto& run : runs) {
    std::size_t n_vqa = 0, n_correct = 0;
    std::vector<SampleIoU> ious;
    std::vector<PointSample> points;
    bool any_direct = false;
    for (const auto& s : rep.samples) {
      if (s.run_id != run.run_id || !s.error.empty()) continue;
      if (s.vqa_correct) {
        ++n_vqa;
        n_correct += *s.vqa_correct ? 1 : 0;
      }
      if (s.iou) ious.push_back({*s.iou, s.none_expression});
      if (s.point_sample) points.push_back(*s.point_sample);
      any_direct = any_direct || s.direct_masks_present;
    }
    std::optional<double> acc;
    if (n_vqa > 0) acc = 100.0 * static_cast<double>(n_correct) / static_cast<double>(n_vqa);
    const MiouResult mi = ious.empty() ? MiouResult{} : miou(ious);
    switch (run.probing) {
      case Probing::P3:
        rep.scores.a = acc;
        break;
      case Probing::P1:
        rep.scores.a_dagger = acc;
        if (!acc) rep.notes.push_back(run.run_id + ": free-form accuracy needs a judge; A_dagger not scored");
        if (run.mask_source == MaskSource::Mined || any_direct) {
          rep.scores.m_dagger = mi.all;
          rep.scores.m_dagger_excluding = mi.excluding;
        }
        if (!points.empty()) point_acc_p1 = point_accuracy(points);
        break;
      case Probing::P2:
        rep.scores.m = mi.all;
        rep.scores.m_excluding = mi.excluding;
        if (!points.empty()) point_acc_p2 = point_accuracy(points);
        break;
    }
  }
  rep.scores.point_accuracy = point_acc_p2 ? point_acc_p2 : point_acc_p1;
  rep.scores.finalize();
  return rep;
}

nlohmann::json report_to_json(const EvaluationReport& rep) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : rep.samples) {
    nlohmann::json j = {{"run_id", s.run_id},
                        {"sample_id", s.sample_id},
                        {"probing", to_string(s.probing)},
                        {"none_expression", s.none_expression}};
    if (!s.error.empty()) {
      j["error"] = s.error;
      samples.push_back(std::move(j));
      continue;
    }
    if (s.vqa_correct) j["vqa_correct"] = *s.vqa_correct;
    if (s.probing == Probing::P3) {
      j["parsed_choice"] = s.parsed_choice ? nlohmann::json(*s.parsed_choice) : nlohmann::json();
    }
    if (s.iou) j["iou"] = *s.iou;
    if (s.probing != Probing::P3) {
      j["n_candidates"] = s.n_candidates;
      j["chosen_phrase"] = s.chosen_phrase ? nlohmann::json(*s.chosen_phrase) : nlohmann::json();
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& p : s.chosen_points) {
        pts.push_back({{"grid_row", p.grid_row},
                       {"grid_col", p.grid_col},
                       {"x", p.image_x},
                       {"y", p.image_y}});
      }
      j["chosen_points"] = std::move(pts);
    }
    samples.push_back(std::move(j));
  }
  const auto headline_m = rep.policy.exclude_none_expressions ? rep.scores.m_excluding
                                                              : rep.scores.m;
  const auto headline_s = rep.policy.exclude_none_expressions ? rep.scores.s_excluding
                                                              : rep.scores.s;
  return {{"benchmark", rep.benchmark},
          {"strategy", to_string(rep.strategy)},
          {"policy",
           {{"exclude_none_expressions", rep.policy.exclude_none_expressions},
            {"failure_iou_threshold", rep.policy.failure_iou_threshold}}},
          {"pick_template", rep.pick_template},
          {"runs", rep.runs},
          {"scores", to_json(rep.scores)},
          {"headline", {{"M", opt_json(headline_m)}, {"S", opt_json(headline_s)}}},
          {"samples", std::move(samples)},
          {"errors", rep.errors},
          {"notes", rep.notes}};
}

// ---- analyze ----

AnalysisReport analyze(const Benchmark& benchmark, std::span<const RunManifest> runs,
                       const AnalyzeOptions& options) {
  AnalysisReport rep;
  KeywordCategorizer keywords;
  Categorizer& cat = options.categorizer ? *options.categorizer : keywords;

  // Per-sample VQA flags and oracle IoUs come from the evaluation pipeline.
  EvaluateOptions eo;
  eo.strategy = Strategy::Oracle;
  eo.policy = options.policy;
  eo.jobs = options.jobs;
  eo.judge = options.judge;
  const EvaluationReport ev = evaluate(benchmark, runs, eo);
  rep.errors = ev.errors;

  auto pick_run = [&](std::initializer_list<Probing> order,
                      bool grounding) -> const RunManifest* {
    for (Probing p : order) {
      for (const auto& r : runs) {
        if (r.probing != p) continue;
        if (grounding && r.mask_source != MaskSource::Mined) continue;
        return &r;
      }
    }
    return nullptr;
  };
  const RunManifest* vqa_run = pick_run({Probing::P3, Probing::P1}, false);
  const RunManifest* ground_run = pick_run({Probing::P2, Probing::P1}, true);

  std::map<std::string, bool> vqa;
  std::map<std::string, double> ious;
  for (const auto& s : ev.samples) {
    if (!s.error.empty()) continue;
    if (vqa_run && s.run_id == vqa_run->run_id && s.vqa_correct) vqa[s.sample_id] = *s.vqa_correct;
    if (ground_run && s.run_id == ground_run->run_id && s.iou) ious[s.sample_id] = *s.iou;
  }
  std::vector<bool> flags;
  std::vector<double> paired;
  for (const auto& [id, ok] : vqa) {
    auto it = ious.find(id);
    if (it == ious.end()) continue;
    flags.push_back(ok);
    paired.push_back(it->second);
  }
  if (!flags.empty()) {
    // std::vector<bool> is not contiguous.
    auto b = std::make_unique<bool[]>(flags.size());
    std::copy(flags.begin(), flags.end(), b.get());
    rep.quadrants = failure_quadrants(std::span<const bool>(b.get(), flags.size()), paired,
                                      options.policy.failure_iou_threshold);
  }

  for (const auto& run : runs) {
    std::vector<OutputRecord> outputs;
    for (const auto& s : benchmark.samples) {
      const SampleRunRef* ref = run.find(s.sample_id);
      if (!ref) continue;
      try {
        outputs.push_back(load_output_record(run.resolve(ref->output)));
      } catch (const std::exception&) {
        // already reported by evaluate
      }
    }
    if (!outputs.empty()) rep.lengths.emplace_back(run.run_id, output_length_stats(outputs));
  }

  if (ground_run) {
    std::vector<const Sample*> samples;
    for (const auto& s : benchmark.samples) samples.push_back(&s);
    std::sort(samples.begin(), samples.end(),
              [](const Sample* a, const Sample* b) { return a->sample_id < b->sample_id; });
    for (const Sample* s : samples) {
      if (s->is_none_expression()) {
        ++rep.discarded_none;
        continue;
      }
      const SampleRunRef* ref = ground_run->find(s->sample_id);
      if (!ref) continue;
      try {
        const OutputRecord out = load_output_record(ground_run->resolve(ref->output));
        const auto cands = load_candidates(*ground_run, *ref, out);
        for (auto& r : emergence_records(*s, out, cands, cat)) rep.emergence.push_back(std::move(r));
      } catch (const std::exception& e) {
        rep.errors.push_back(ground_run->run_id + "/" + s->sample_id + ": " + e.what());
      }
    }
  }
  std::vector<double> pcts;
  for (const auto& r : rep.emergence) {
    pcts.push_back(r.location_pct);
    ++rep.concept_counts[static_cast<std::size_t>(r.concept_label)];
  }
  rep.location_bins = location_histogram(pcts);
  std::sort(rep.errors.begin(), rep.errors.end());
  rep.errors.erase(std::unique(rep.errors.begin(), rep.errors.end()), rep.errors.end());
  return rep;
}

nlohmann::json to_json(const AnalysisReport& rep) {
  nlohmann::json emergence = nlohmann::json::array();
  for (const auto& r : rep.emergence) emergence.push_back(to_json(r));
  nlohmann::json concepts = nlohmann::json::object();
  for (Concept c : all_concepts()) {
    concepts[to_string(c)] = rep.concept_counts[static_cast<std::size_t>(c)];
  }
  nlohmann::json lengths = nlohmann::json::array();
  for (const auto& [id, st] : rep.lengths) {
    lengths.push_back({{"run_id", id}, {"mean_chars", st.mean_chars}, {"mean_phrases", st.mean_phrases}});
  }
  return {{"emergence", std::move(emergence)},
          {"location_histogram", rep.location_bins},
          {"concepts", std::move(concepts)},
          {"failure_quadrants", rep.quadrants ? to_json(*rep.quadrants) : nlohmann::json()},
          {"output_lengths", std::move(lengths)},
          {"discarded_none", rep.discarded_none},
          {"errors", rep.errors}};
}

// ---- render ----

std::vector<RenderedFile> render_sample(const Benchmark& benchmark, const RunManifest& run,
                                        const std::string& sample_id,
                                        const std::filesystem::path& out_dir,
                                        const OverlayStyle& style) {
  const Sample* sample = benchmark.find(sample_id);
  if (!sample) throw InvalidArgument("sample " + sample_id + " not in benchmark");
  const SampleRunRef* ref = run.find(sample_id);
  if (!ref) throw InvalidArgument("sample " + sample_id + " not in run " + run.run_id);
  const OutputRecord out = load_output_record(run.resolve(ref->output));
  const auto cands = load_candidates(run, *ref, out);
  if (cands.empty()) throw InvalidArgument("sample " + sample_id + " has no candidates to render");

  const Image image = load_sample_image(benchmark, *sample, true);
  if (image.width() != run.image_size_for(*ref).width ||
      image.height() != run.image_size_for(*ref).height) {
    throw SchemaError("image size differs from run image size for sample " + sample_id);
  }
  std::filesystem::create_directories(out_dir);
  std::vector<RenderedFile> files;
  std::vector<Image> tiles;
  auto save = [&](const Image& img, const std::string& name) {
    const auto png = encode_png(img);
    const auto path = out_dir / name;
    std::ofstream f(path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
    if (!f) throw Error("cannot write " + path.string());
    files.push_back({path, png_digest(png)});
  };
  for (const auto& c : cands) {
    Image img = render_candidate(image, c.mask, c.point.image_x, c.point.image_y, style);
    save(img, "candidate_p" + std::to_string(c.phrase_index) + "_r" +
                  std::to_string(c.segmenter_rank) + ".png");
    tiles.push_back(std::move(img));
  }
  save(compose_group_sheet(tiles), "sheet.png");
  return files;
}

// ---- validate ----

ValidationReport validate_benchmark_file(const std::filesystem::path& path) {
  ValidationReport rep;
  try {
    const nlohmann::json doc = read_json_file(path);
    const Benchmark b = parse_benchmark(doc, path.parent_path());
    rep.checked = b.samples.size();
  } catch (const std::exception& e) {
    rep.errors.push_back(e.what());
  }
  return rep;
}

ValidationReport validate_run_file(const std::filesystem::path& path, const Benchmark* benchmark) {
  ValidationReport rep;
  RunManifest run;
  try {
    run = load_run_manifest(path, true);
  } catch (const std::exception& e) {
    rep.errors.push_back(e.what());
    return rep;
  }
  for (const auto& ref : run.samples) {
    const std::string where = ref.sample_id + ": ";
    ++rep.checked;
    try {
      const OutputRecord out = load_output_record(run.resolve(ref.output));
      validate_output(out);
      const MaskSize size = run.image_size_for(ref);
      if (!ref.attention.empty()) {
        const AttentionRun att = read_attention_file(run.resolve(ref.attention));
        if (att.rows != run.grid_h || att.cols != run.grid_w) {
          rep.errors.push_back(where + "attention grid dims differ from the run's");
        }
        if (att.n_tokens() != out.n_tokens()) {
          rep.errors.push_back(where + "attention token count " + std::to_string(att.n_tokens()) +
                               " != output token count " + std::to_string(out.n_tokens()));
        }
      }
      if (!ref.masks.empty()) {
        const SampleMasks masks = load_sample_masks(run.resolve(ref.masks));
        auto check = [&](const MaskRLE& m, const std::string& what) {
          try {
            validate_rle(m);
          } catch (const std::exception& e) {
            rep.errors.push_back(where + what + ": " + e.what());
            return;
          }
          if (m.size != size) rep.errors.push_back(where + what + ": size differs from image size");
        };
        for (std::size_t p = 0; p < masks.prompts.size(); ++p) {
          if (masks.prompts[p].masks.size() != 3) {
            rep.errors.push_back(where + "prompt " + std::to_string(p) + " has " +
                                 std::to_string(masks.prompts[p].masks.size()) +
                                 " masks, expected 3");
          }
          for (std::size_t k = 0; k < masks.prompts[p].masks.size(); ++k) {
            check(masks.prompts[p].masks[k],
                  "prompt " + std::to_string(p) + " mask " + std::to_string(k));
          }
        }
        for (std::size_t k = 0; k < masks.direct_masks.size(); ++k) {
          check(masks.direct_masks[k], "direct mask " + std::to_string(k));
        }
      }
      if (benchmark) {
        const Sample* s = benchmark->find(ref.sample_id);
        if (!s) {
          rep.errors.push_back(where + "not in benchmark");
        } else if (auto ms = s->mask_size(); ms && *ms != size) {
          rep.errors.push_back(where + "run image size differs from gt mask size");
        }
      }
    } catch (const std::exception& e) {
      rep.errors.push_back(where + e.what());
    }
  }
  return rep;
}

nlohmann::json to_json(const ValidationReport& report) {
  return {{"ok", report.ok()}, {"checked", report.checked}, {"errors", report.errors}};
}

// ---- perturb ----

nlohmann::json perturb_benchmark(const Benchmark& benchmark, const PerturbOptions& options,
                                 const std::filesystem::path& out_dir) {
  if (options.suite == SuiteKind::Vqa && !options.rewriter) {
    throw InvalidArgument("the vqa suite needs a rewriter for paraphrases");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<const Sample*> samples;
  for (const auto& s : benchmark.samples) samples.push_back(&s);
  std::sort(samples.begin(), samples.end(),
            [](const Sample* a, const Sample* b) { return a->sample_id < b->sample_id; });

  nlohmann::json entries = nlohmann::json::array();
  for (const Sample* s : samples) {
    nlohmann::json entry = {{"sample_id", s->sample_id}};
    std::vector<VariationItem> items;
    try {
      switch (options.suite) {
        case SuiteKind::Vqa:
          items = build_vqa_suite(*s, options.suite_options, *options.rewriter);
          break;
        case SuiteKind::Visual:
          items = build_visual_suite(*s, options.suite_options);
          break;
        case SuiteKind::GroundingLanguage:
          items = build_grounding_suite(*s, options.suite_options);
          break;
      }
    } catch (const InvalidArgument& e) {
      entry["skipped"] = e.what();
      entries.push_back(std::move(entry));
      continue;
    }
    if (items.size() != suite_size(options.suite)) {
      throw Error(to_string(options.suite) + " suite for " + s->sample_id + " has " +
                  std::to_string(items.size()) + " items");
    }
    nlohmann::json arr = nlohmann::json::array();
    std::optional<Image> image;
    if (options.suite == SuiteKind::Visual && options.write_images) {
      const auto p = benchmark.root / s->image_path;
      if (!s->image_path.empty() && std::filesystem::exists(p)) image = load_image(p);
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      nlohmann::json j = to_json(items[i]);
      if (image && items[i].rect) {
        const bool crop = items[i].spec.kind == PerturbationKind::GuidedCrop;
        const Image edited =
            crop ? crop_image(*image, *items[i].rect) : paint_rect(*image, *items[i].rect);
        const std::string name = s->sample_id + "_" + to_string(items[i].spec.kind) + "_" +
                                 std::to_string(i) + ".png";
        write_png(edited, out_dir / name);
        j["image"] = name;
      }
      arr.push_back(std::move(j));
    }
    entry["items"] = std::move(arr);
    entries.push_back(std::move(entry));
  }
  nlohmann::json manifest = {{"benchmark", benchmark.name},
                             {"suite", to_string(options.suite)},
                             {"seed", options.suite_options.seed},
                             {"n_sites", options.suite_options.n_sites},
                             {"items_per_sample", suite_size(options.suite)},
                             {"samples", std::move(entries)}};
  write_json_file(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace pixground
