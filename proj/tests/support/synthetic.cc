// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.h"

#include <algorithm>
#include <stdexcept>

#include "pixground/attention.h"
#include "pixground/attention_file.h"
#include "pixground/error.h"
#include "pixground/pipeline.h"
#include "pixground/prompts.h"
#include "pixground/rng.h"
#include "pixground/selection.h"
#include "pixground/text.h"

namespace pixground::testing {
namespace {

struct Named {
  const char* expression;
  Rgb color;
};

const Named kObjects[] = {
    {"the orange square", {240, 140, 20}}, {"the blue block", {30, 60, 200}},
    {"the green tile", {40, 170, 60}},     {"the purple box", {130, 50, 160}},
    {"the yellow patch", {230, 210, 40}},  {"the teal card", {20, 150, 150}},
};

const char* kDistractors[] = {"the background", "a faint shadow", "the lower corner",
                              "some grass",     "the wooden frame", "the empty space"};

const char* kConnectors[] = {", next to ", " and also ", ", near ", " beside ", ", then "};

MaskRLE rect_mask(MaskSize size, const Rect& r) {
  Bitmask bm(size);
  for (std::uint32_t y = r.y0; y < r.y1; ++y) {
    for (std::uint32_t x = r.x0; x < r.x1; ++x) bm.set(y, x);
  }
  return encode_rle(bm);
}

bool overlaps(const Rect& a, const Rect& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

struct Layout {
  std::uint32_t W, H, gw, gh;
  std::uint32_t cx0(std::uint32_t c) const { return c * W / gw; }
  std::uint32_t cy0(std::uint32_t r) const { return r * H / gh; }
  std::pair<double, double> center(std::uint32_t r, std::uint32_t c) const {
    return grid_to_image_point(r, c, gh, gw, MaskSize{H, W});
  }
};

struct PhrasePlan {
  std::string text;
  std::uint32_t row, col;
  int object = -1;  // index into objects, -1 for distractors
};

// Whitespace tokens with code point offsets.
std::vector<std::pair<std::size_t, std::size_t>> tokenize(const std::string& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = text::codepoint_count(s);
  std::size_t i = 0;
  auto cp_is_space = [&](std::size_t k) {
    const auto b = text::byte_offset(s, k);
    return s[b] == ' ';
  };
  while (i < n) {
    while (i < n && cp_is_space(i)) ++i;
    if (i >= n) break;
    const std::size_t start = i;
    while (i < n && !cp_is_space(i)) ++i;
    out.emplace_back(start, i);
  }
  return out;
}

SynthRunSample build_run_sample(const SynthOptions& o, const Layout& L, Rng& rng,
                                const std::string& prefix, const std::vector<PhrasePlan>& plan,
                                const std::vector<Rect>& objects, std::size_t n_expressions) {
  SynthRunSample rs;
  std::string text = prefix;
  std::vector<std::pair<std::size_t, std::size_t>> phrase_chars;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i > 0) text += kConnectors[(i - 1) % std::size(kConnectors)];
    const std::size_t start = text::codepoint_count(text);
    text += plan[i].text;
    phrase_chars.emplace_back(start, text::codepoint_count(text));
  }
  text += ".";
  rs.output.text = text;
  rs.output.token_offsets = tokenize(text);

  for (std::size_t i = 0; i < plan.size(); ++i) {
    PhraseSpan span;
    span.text = plan[i].text;
    span.char_start = phrase_chars[i].first;
    span.char_end = phrase_chars[i].second;
    const auto& toks = rs.output.token_offsets;
    std::size_t ts = 0;
    while (ts < toks.size() && toks[ts].first < span.char_start) ++ts;
    std::size_t te = ts;
    while (te < toks.size() && toks[te].first < span.char_end) ++te;
    span.token_start = ts;
    span.token_end = te;
    const bool planted = plan[i].object >= 0;
    span.similarity_to_expr = planted ? o.planted_similarity : o.distractor_similarity;
    if (n_expressions >= 2) {
      for (std::size_t e = 0; e < n_expressions; ++e) {
        span.similarities.push_back(planted && plan[i].object == static_cast<int>(e)
                                        ? o.planted_similarity
                                        : o.distractor_similarity);
      }
    }
    rs.output.phrase_spans.push_back(std::move(span));
  }

  // Attention: low noise everywhere, a peak at each phrase's cell for its tokens.
  const std::size_t n_tok = rs.output.token_offsets.size();
  for (std::size_t t = 0; t < n_tok; ++t) {
    Grid g(L.gh, L.gw);
    for (auto& v : g.cells()) v = 0.05 * rng.uniform();
    for (std::size_t i = 0; i < plan.size(); ++i) {
      const auto& sp = rs.output.phrase_spans[i];
      if (t >= sp.token_start && t < sp.token_end) g(plan[i].row, plan[i].col) += 0.9;
    }
    // Round through float so in-memory grids equal what the file stores.
    for (auto& v : g.cells()) v = static_cast<double>(static_cast<float>(v));
    rs.attention.push_back(std::move(g));
  }

  const MaskSize size{L.H, L.W};
  const NormalizedAttention norm = normalize_across_outputs(rs.attention);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const Grid pg = phrase_attention(norm, rs.output.phrase_spans[i]);
    const AttentionPoint pt = argmax_point(pg, 1, size);
    if (pt.grid_row != plan[i].row || pt.grid_col != plan[i].col) {
      throw std::logic_error("synthetic attention peak not recovered");
    }
    PromptMasks pm{pt.image_x, pt.image_y, {}};
    if (plan[i].object >= 0) {
      const Rect& r = objects[static_cast<std::size_t>(plan[i].object)];
      pm.masks.push_back(rect_mask(size, r));  // exact object
      Rect half = r;
      half.x1 = r.x0 + std::max<std::uint32_t>(1, r.width() / 2);
      pm.masks.push_back(rect_mask(size, half));
      Rect grown{r.x0 >= 4 ? r.x0 - 4 : 0, r.y0 >= 4 ? r.y0 - 4 : 0, std::min(L.W, r.x1 + 4),
                 std::min(L.H, r.y1 + 4)};
      pm.masks.push_back(rect_mask(size, grown));
    } else {
      const auto px = static_cast<std::uint32_t>(pt.image_x);
      const auto py = static_cast<std::uint32_t>(pt.image_y);
      for (std::uint32_t h : {5u, 7u, 9u}) {  // wider than the point marker
        Rect sq{px >= h ? px - h : 0, py >= h ? py - h : 0, std::min(L.W, px + h + 1),
                std::min(L.H, py + h + 1)};
        pm.masks.push_back(rect_mask(size, sq));
      }
    }
    rs.masks.prompts.push_back(std::move(pm));
  }
  return rs;
}

}  // namespace

SynthDataset make_synthetic(const SynthOptions& o) {
  SynthDataset ds;
  ds.options = o;
  ds.benchmark.name = "synthetic";
  const Layout L{o.width, o.height, o.grid_w, o.grid_h};
  const MaskSize size{o.height, o.width};
  Rng rng(o.seed);

  for (std::size_t i = 0; i < o.n_samples; ++i) {
    SynthSample ss;
    Sample& s = ss.sample;
    char id[32];
    std::snprintf(id, sizeof id, "syn_%03zu", i);
    s.sample_id = id;
    s.image_path = "images/" + s.sample_id + ".png";
    s.choices = {"Yes", "No"};
    s.answer = s.choices[rng.below(2)];

    const bool none = o.include_none && i % 5 == 4;
    const std::size_t n_obj = none ? 0 : (o.include_multi && i % 4 == 1 ? 2 : 1);

    // Objects: grid-aligned rectangles around a planted cell, non-overlapping.
    std::vector<std::size_t> kinds;
    for (std::size_t k = 0; k < n_obj; ++k) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000) throw std::logic_error("cannot place synthetic objects");
        const auto r = static_cast<std::uint32_t>(rng.below(o.grid_h));
        const auto c = static_cast<std::uint32_t>(rng.below(o.grid_w));
        const auto gl = static_cast<std::uint32_t>(std::min<std::uint64_t>(c, rng.below(2)));
        const auto gt = static_cast<std::uint32_t>(std::min<std::uint64_t>(r, rng.below(2)));
        const auto gr = static_cast<std::uint32_t>(
            std::min<std::uint64_t>(o.grid_w - 1 - c, rng.below(2)));
        const auto gb = static_cast<std::uint32_t>(
            std::min<std::uint64_t>(o.grid_h - 1 - r, rng.below(2)));
        Rect rect{L.cx0(c - gl), L.cy0(r - gt), L.cx0(c + gr + 1), L.cy0(r + gb + 1)};
        bool clash = false;
        for (const auto& other : ss.objects) clash = clash || overlaps(rect, other);
        if (clash) continue;
        std::size_t kind = rng.below(std::size(kObjects));
        while (std::find(kinds.begin(), kinds.end(), kind) != kinds.end()) {
          kind = (kind + 1) % std::size(kObjects);
        }
        kinds.push_back(kind);
        ss.objects.push_back(rect);
        ss.planted_cells.emplace_back(r, c);
        break;
      }
    }

    if (none) {
      s.expressions = {kNoneExpression};
      s.question = "Is the picture taken indoors?";
      s.image_size = size;
    } else {
      for (std::size_t k = 0; k < n_obj; ++k) {
        s.expressions.push_back(kObjects[kinds[k]].expression);
        s.gt_masks.push_back(rect_mask(size, ss.objects[k]));
      }
      s.question = n_obj == 2 ? "Is " + s.expressions[0] + " left of " + s.expressions[1] + "?"
                              : "Is " + s.expressions[0] + " in the upper half of the image?";
    }

    // Image: soft gradient background, flat-colored objects.
    ss.image = Image(o.width, o.height);
    for (std::uint32_t y = 0; y < o.height; ++y) {
      for (std::uint32_t x = 0; x < o.width; ++x) {
        ss.image.set(x, y,
                     Rgb{static_cast<std::uint8_t>(90 + x % 40), static_cast<std::uint8_t>(100 + y % 30),
                         110});
      }
    }
    for (std::size_t k = 0; k < n_obj; ++k) {
      const Rect& r = ss.objects[k];
      for (std::uint32_t y = r.y0; y < r.y1; ++y) {
        for (std::uint32_t x = r.x0; x < r.x1; ++x) ss.image.set(x, y, kObjects[kinds[k]].color);
      }
    }

    // Phrases: planted ones plus distractors at cells outside every object.
    std::vector<PhrasePlan> plan;
    for (std::size_t k = 0; k < n_obj; ++k) {
      plan.push_back({s.expressions[k], ss.planted_cells[k].first, ss.planted_cells[k].second,
                      static_cast<int>(k)});
    }
    for (std::size_t d = 0; d < o.n_distractors; ++d) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000) throw std::logic_error("cannot place synthetic distractors");
        const auto r = static_cast<std::uint32_t>(rng.below(o.grid_h));
        const auto c = static_cast<std::uint32_t>(rng.below(o.grid_w));
        const auto [cx, cy] = L.center(r, c);
        bool bad = false;
        for (const auto& obj : ss.objects) {
          // Keep a margin so distractor squares stay clear of the objects.
          const Rect pad{obj.x0 >= 4 ? obj.x0 - 4 : 0, obj.y0 >= 4 ? obj.y0 - 4 : 0, obj.x1 + 4,
                         obj.y1 + 4};
          bad = bad || pad.contains(static_cast<std::uint32_t>(cx), static_cast<std::uint32_t>(cy));
        }
        for (const auto& p : plan) bad = bad || (p.row == r && p.col == c);
        if (bad) continue;
        plan.push_back({kDistractors[(i + d) % std::size(kDistractors)], r, c, -1});
        break;
      }
    }
    rng.shuffle(plan.begin(), plan.end());

    ss.p2 = build_run_sample(o, L, rng, "Voilà: I can see ", plan, ss.objects,
                             s.expressions.size());
    ss.p1 = build_run_sample(o, L, rng, "The answer is " + s.answer + ". In the image there is ",
                             plan, ss.objects, s.expressions.size());

    const std::size_t ans = *s.answer_index();
    const std::size_t letter = o.vqa_correct ? ans : 1 - ans;
    switch (i % 3) {
      case 0: ss.p3_text = prompts::choice_letter(letter) + "."; break;
      case 1: ss.p3_text = "(" + prompts::choice_letter(letter) + ") " + s.choices[letter]; break;
      default: ss.p3_text = "**" + std::string(1, static_cast<char>('A' + letter)) + "**"; break;
    }

    ds.benchmark.samples.push_back(s);
    ds.samples.push_back(std::move(ss));
  }
  return ds;
}

SynthPaths write_synthetic(const SynthDataset& ds, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  SynthPaths paths;
  fs::create_directories(dir / "images");
  paths.benchmark = dir / "benchmark.json";
  save_benchmark(ds.benchmark, paths.benchmark);
  for (const auto& ss : ds.samples) write_png(ss.image, dir / ss.sample.image_path);

  auto write_run = [&](Probing probing, const std::string& name) {
    const fs::path rd = dir / "runs" / name;
    fs::create_directories(rd);
    RunManifest run;
    run.run_id = "synthetic-" + name;
    run.model_name = "mock";
    run.probing = probing;
    run.grid_h = ds.options.grid_h;
    run.grid_w = ds.options.grid_w;
    run.image_w = ds.options.width;
    run.image_h = ds.options.height;
    for (const auto& ss : ds.samples) {
      const std::string id = ss.sample.sample_id;
      SampleRunRef ref;
      ref.sample_id = id;
      ref.output = id + ".output.json";
      if (probing == Probing::P3) {
        OutputRecord rec;
        rec.text = ss.p3_text;
        rec.token_offsets = tokenize(rec.text);
        write_json_file(nlohmann::json(rec), rd / ref.output);
      } else {
        const SynthRunSample& rs = probing == Probing::P1 ? ss.p1 : ss.p2;
        write_json_file(nlohmann::json(rs.output), rd / ref.output);
        ref.attention = id + ".atng";
        write_attention_file(rs.attention, rd / ref.attention);
        ref.masks = id + ".masks.json";
        write_json_file(nlohmann::json(rs.masks), rd / ref.masks);
      }
      run.samples.push_back(std::move(ref));
    }
    const fs::path mp = rd / "manifest.json";
    save_run_manifest(run, mp);
    return mp;
  };
  paths.run_p1 = write_run(Probing::P1, "p1");
  paths.run_p2 = write_run(Probing::P2, "p2");
  paths.run_p3 = write_run(Probing::P3, "p3");

  paths.transcript = dir / "judge_transcript.json";
  paths.config = dir / "config.json";
  write_json_file({{"judge",
                    {{"endpoint", "http://127.0.0.1:9/judge"},
                     {"auth_env", "PIXGROUND_JUDGE_TOKEN"},
                     {"model", "scripted"},
                     {"transcript", "judge_transcript.json"}}},
                   {"rewriter", {{"kind", "echo"}}}},
                  paths.config);
  return paths;
}

std::string ScriptedJudgeBackend::query(JudgeQuery kind,
                                        std::span<const std::vector<std::uint8_t>> png_images,
                                        const std::string& prompt) {
  ++calls;
  if (kind == JudgeQuery::YesNo) return no_prompts.count(prompt) ? "No" : yes_no_reply;
  auto it = good.find(prompt);
  if (it != good.end()) {
    for (std::size_t i = 0; i < png_images.size(); ++i) {
      if (it->second.count(png_digest(png_images[i]))) return std::to_string(i + 1);
    }
  }
  return "1";
}

std::shared_ptr<ScriptedJudgeBackend> scripted_judge(const SynthDataset& ds,
                                                     const OverlayStyle& style) {
  auto judge = std::make_shared<ScriptedJudgeBackend>();
  judge->no_prompts.insert(prompts::existence_prompt(kNoneExpression));
  for (const auto& ss : ds.samples) {
    for (const SynthRunSample* rs : {&ss.p1, &ss.p2}) {
      for (std::size_t e = 0; e < ss.sample.gt_masks.size(); ++e) {
        for (const auto& pm : rs->masks.prompts) {
          if (pm.masks.front() != ss.sample.gt_masks[e]) continue;
          const Image img =
              render_candidate(ss.image, pm.masks.front(), pm.x, pm.y, style);
          judge->good[prompts::pick_prompt(ss.sample.expressions[e])].insert(
              png_digest(encode_png(img)));
        }
      }
    }
  }
  return judge;
}

void record_judge_transcript(const SynthDataset& ds, const SynthPaths& paths) {
  const Benchmark bench = load_benchmark(paths.benchmark);
  std::vector<RunManifest> runs = {load_run_manifest(paths.run_p1), load_run_manifest(paths.run_p2),
                                   load_run_manifest(paths.run_p3)};
  auto judge = scripted_judge(ds);
  TranscriptJudgeProvider provider(TranscriptMode::Record, paths.transcript,
                                   [judge] { return judge; });
  EvaluateOptions opts;
  opts.strategy = Strategy::Automatic;
  opts.judge = &provider;
  const EvaluationReport rep = evaluate(bench, runs, opts);
  if (!rep.ok()) throw std::runtime_error("recording run failed: " + rep.errors.front());
  provider.finish();
}

}  // namespace pixground::testing
