// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/perturbation.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "pixground/benchmark.h"
#include "pixground/error.h"
#include "pixground/masks.h"
#include "pixground/text.h"

namespace pixground {

std::string to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::Spelling: return "spelling";
    case PerturbationKind::Template: return "template";
    case PerturbationKind::Paraphrase: return "paraphrase";
    case PerturbationKind::GuidedCrop: return "guided_crop";
    case PerturbationKind::GuidedMask: return "guided_mask";
    case PerturbationKind::GroundingSpelling: return "grounding_spelling";
    case PerturbationKind::ExpressionSpelling: return "expression_spelling";
  }
  return "?";
}

PerturbationKind parse_perturbation_kind(std::string_view s) {
  for (auto k : {PerturbationKind::Spelling, PerturbationKind::Template,
                 PerturbationKind::Paraphrase, PerturbationKind::GuidedCrop,
                 PerturbationKind::GuidedMask, PerturbationKind::GroundingSpelling,
                 PerturbationKind::ExpressionSpelling}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown perturbation kind '" + std::string(s) + "'");
}

std::string to_string(EditOp op) {
  switch (op) {
    case EditOp::Omit: return "omit";
    case EditOp::Transpose: return "transpose";
    case EditOp::Insert: return "insert";
  }
  return "?";
}

std::string to_string(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
  }
  return "?";
}

// ---- spelling ----

std::string SpellingOutcome::joined() const {
  std::string out;
  for (const auto& s : segments) out += s.text;
  return out;
}

namespace {

bool ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

}  // namespace

SpellingOutcome perturb_segments(std::vector<TextSegment> segments, std::size_t n_sites,
                                 Rng& rng) {
  struct Site {
    std::size_t seg, pos;
  };
  std::vector<Site> sites;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!segments[s].editable) continue;
    const auto& t = segments[s].text;
    for (std::size_t p = 0; p < t.size(); ++p) {
      if (ascii_letter(t[p])) sites.push_back({s, p});
    }
  }

  // Pool of unconsumed site ids with O(1) removal.
  std::vector<std::size_t> pool(sites.size());
  std::vector<std::size_t> slot(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) pool[i] = slot[i] = i;
  auto take = [&](std::size_t id) {
    const std::size_t k = slot[id];
    const std::size_t last = pool.back();
    pool[k] = last;
    slot[last] = k;
    pool.pop_back();
    slot[id] = SIZE_MAX;
  };
  auto free_neighbour = [&](std::size_t id, std::ptrdiff_t dir) -> std::optional<std::size_t> {
    const auto n = static_cast<std::ptrdiff_t>(id) + dir;
    if (n < 0 || n >= static_cast<std::ptrdiff_t>(sites.size())) return std::nullopt;
    const auto nid = static_cast<std::size_t>(n);
    if (slot[nid] == SIZE_MAX) return std::nullopt;
    if (sites[nid].seg != sites[id].seg) return std::nullopt;
    const auto gap =
        static_cast<std::ptrdiff_t>(sites[nid].pos) - static_cast<std::ptrdiff_t>(sites[id].pos);
    if (gap != dir) return std::nullopt;  // not an adjacent letter
    return nid;
  };

  SpellingOutcome out;
  out.requested = n_sites;
  struct Planned {
    SpellingEdit edit;
    std::size_t partner_pos = 0;
  };
  std::vector<Planned> plan;
  while (plan.size() < n_sites && !pool.empty()) {
    const std::size_t id = pool[rng.below(pool.size())];
    take(id);
    auto op = static_cast<EditOp>(rng.below(3));
    std::size_t partner_pos = 0;
    if (op == EditOp::Transpose) {
      auto nb = free_neighbour(id, +1);
      if (!nb) nb = free_neighbour(id, -1);
      if (nb) {
        take(*nb);
        partner_pos = sites[*nb].pos;
      } else {
        op = rng.below(2) == 0 ? EditOp::Omit : EditOp::Insert;
      }
    }
    SpellingEdit e{sites[id].seg, sites[id].pos, op, 0, 0};
    if (op == EditOp::Insert) e.inserted = static_cast<char>('a' + rng.below(26));
    if (op == EditOp::Transpose) e.partner = partner_pos;
    plan.push_back({e, partner_pos});
  }

  // Apply right-to-left inside each segment so earlier byte positions hold.
  std::vector<std::size_t> order(plan.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto lead = [&](const Planned& p) {
    return p.edit.op == EditOp::Transpose ? std::min(p.edit.position, p.partner_pos)
                                          : p.edit.position;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (plan[a].edit.segment != plan[b].edit.segment) {
      return plan[a].edit.segment < plan[b].edit.segment;
    }
    return lead(plan[a]) > lead(plan[b]);
  });
  for (std::size_t i : order) {
    const auto& p = plan[i];
    std::string& t = segments[p.edit.segment].text;
    switch (p.edit.op) {
      case EditOp::Omit: t.erase(p.edit.position, 1); break;
      case EditOp::Insert: t.insert(p.edit.position + 1, 1, p.edit.inserted); break;
      case EditOp::Transpose: std::swap(t[p.edit.position], t[p.partner_pos]); break;
    }
  }
  out.segments = std::move(segments);
  for (const auto& p : plan) out.edits.push_back(p.edit);
  return out;
}

std::string SpellingResult::prompt() const {
  std::string p = prompts::question_with_mark(question) + " " + prompts::lettered_choices(choices);
  if (!instruction.empty()) p += " " + instruction;
  return p;
}

SpellingResult spelling_perturb(std::string_view question, std::span<const std::string> choices,
                                std::string_view instruction, std::uint64_t seed,
                                std::size_t n_sites) {
  if (question.empty() && choices.empty()) {
    throw InvalidArgument("spelling perturbation needs a question or choices");
  }
  Rng rng(seed);
  std::vector<TextSegment> joint;
  joint.push_back({std::string(question), true});
  for (std::size_t i = 0; i < choices.size(); ++i) {
    joint.push_back({" ", false});
    joint.push_back({prompts::choice_letter(i) + ".", false});
    joint.push_back({choices[i], true});
  }
  SpellingResult res;
  res.joint = perturb_segments(std::move(joint), n_sites, rng);
  res.instruction_edits =
      perturb_segments({{std::string(instruction), true}}, instruction.empty() ? 0 : n_sites, rng);

  res.question = res.joint.segments[0].text;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    res.choices.push_back(res.joint.segments[3 + 3 * i].text);
  }
  res.instruction = res.instruction_edits.segments[0].text;
  return res;
}

namespace {

SpellingOutcome grounding_variant(std::size_t template_id, std::string_view expression,
                                  prompts::GroundingModality modality, std::uint64_t seed,
                                  std::size_t n_sites, bool edit_expression) {
  const std::string tmpl = prompts::grounding_template(template_id, modality);
  const std::size_t at = tmpl.find("EXPR");
  std::vector<TextSegment> segs = {{tmpl.substr(0, at), !edit_expression},
                                   {std::string(expression), edit_expression},
                                   {tmpl.substr(at + 4), !edit_expression}};
  Rng rng(seed);
  return perturb_segments(std::move(segs), n_sites, rng);
}

}  // namespace

SpellingOutcome grounding_spelling_perturb(std::size_t template_id, std::string_view expression,
                                           prompts::GroundingModality modality,
                                           std::uint64_t seed, std::size_t n_sites) {
  return grounding_variant(template_id, expression, modality, seed, n_sites, false);
}

SpellingOutcome expression_spelling_perturb(std::size_t template_id, std::string_view expression,
                                            prompts::GroundingModality modality,
                                            std::uint64_t seed, std::size_t n_sites) {
  return grounding_variant(template_id, expression, modality, seed, n_sites, true);
}

// ---- paraphrase ----

std::string paraphrase_prompt(std::string_view question, std::size_t variant) {
  return "Rewrite the following question in different words without changing its meaning or "
         "its answer. Reply with the rewritten question only. Variation " +
         std::to_string(variant + 1) + ".\nQuestion: " + std::string(question);
}

std::string TextRewriter::rewrite(const std::string& question, std::size_t variant) {
  return client_->complete(paraphrase_prompt(question, variant));
}

std::string paraphrase(const std::string& question, Rewriter& rewriter, std::size_t variant) {
  return rewriter.rewrite(question, variant);
}

// ---- visual ----

namespace {

Bitmask require_object(const MaskRLE& object, std::uint64_t& total) {
  Bitmask bm = decode_rle(object);
  total = bm.count();
  if (total == 0) throw InvalidArgument("guided perturbation needs a non-empty object mask");
  return bm;
}

}  // namespace

CropResult guided_crop(const MaskRLE& object, std::uint64_t seed, double min_fraction) {
  std::uint64_t total = 0;
  const Bitmask bm = require_object(object, total);
  const std::uint32_t H = bm.height(), W = bm.width();
  std::vector<std::uint64_t> col(W, 0), row(H, 0);
  std::uint32_t xmin = W, xmax = 0, ymin = H, ymax = 0;
  for (std::uint32_t y = 0; y < H; ++y) {
    for (std::uint32_t x = 0; x < W; ++x) {
      if (!bm.at(y, x)) continue;
      ++col[x];
      ++row[y];
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  const double need = min_fraction * static_cast<double>(total);

  // For a side: per-line counts walked from that edge, the line count
  // available (keeping one), and how far the object reaches from the edge.
  struct Axis {
    std::vector<std::uint64_t> lines;
    std::uint32_t max_cut;
    std::uint32_t reach;
  };
  auto axis = [&](Side s) {
    Axis a;
    const bool horiz = s == Side::Left || s == Side::Right;
    a.lines = horiz ? col : row;
    if (s == Side::Right || s == Side::Bottom) std::reverse(a.lines.begin(), a.lines.end());
    const std::uint32_t n = horiz ? W : H;
    a.max_cut = n - 1;
    switch (s) {
      case Side::Left: a.reach = xmax + 1; break;
      case Side::Right: a.reach = W - xmin; break;
      case Side::Top: a.reach = ymax + 1; break;
      case Side::Bottom: a.reach = H - ymin; break;
    }
    return a;
  };
  // Minimal cut removing more than `need`, if one fits.
  auto minimal_cut = [&](const Axis& a) -> std::optional<std::uint32_t> {
    std::uint64_t removed = 0;
    for (std::uint32_t k = 1; k <= a.max_cut; ++k) {
      removed += a.lines[k - 1];
      if (static_cast<double>(removed) > need) return k;
    }
    return std::nullopt;
  };
  auto removed_by = [](const Axis& a, std::uint32_t k) {
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < k; ++i) r += a.lines[i];
    return r;
  };
  auto keep_rect = [&](Side s, std::uint32_t k) {
    switch (s) {
      case Side::Left: return Rect{k, 0, W, H};
      case Side::Right: return Rect{0, 0, W - k, H};
      case Side::Top: return Rect{0, k, W, H};
      case Side::Bottom: return Rect{0, 0, W, H - k};
    }
    return Rect{};
  };

  Rng rng(seed);
  std::array<Side, 4> sides = {Side::Left, Side::Right, Side::Top, Side::Bottom};
  rng.shuffle(sides.begin(), sides.end());

  CropResult res;
  for (Side s : sides) {
    const Axis a = axis(s);
    const auto k = minimal_cut(a);
    if (!k) continue;
    const std::uint32_t hi = std::max(*k, std::min(a.reach, a.max_cut));
    const std::uint32_t cut = *k + static_cast<std::uint32_t>(rng.below(hi - *k + 1));
    res.side = s;
    res.keep = keep_rect(s, cut);
    res.removed_fraction =
        static_cast<double>(removed_by(a, cut)) / static_cast<double>(total);
    return res;
  }

  // No side can remove enough: take the deepest allowed cut on the best side.
  res.fallback = true;
  std::uint64_t best = 0;
  bool first = true;
  for (Side s : {Side::Left, Side::Right, Side::Top, Side::Bottom}) {
    const Axis a = axis(s);
    const std::uint64_t r = removed_by(a, a.max_cut);
    if (first || r > best) {
      best = r;
      first = false;
      res.side = s;
      res.keep = keep_rect(s, a.max_cut);
    }
  }
  res.removed_fraction = static_cast<double>(best) / static_cast<double>(total);
  return res;
}

OccluderResult guided_mask(const MaskRLE& object, std::uint64_t seed, double min_fraction,
                           double max_expand) {
  std::uint64_t total = 0;
  const Bitmask bm = require_object(object, total);
  const std::uint32_t H = bm.height(), W = bm.width();

  // Summed-area table, (H+1) x (W+1).
  std::vector<std::uint64_t> sat(std::size_t{H + 1} * (W + 1), 0);
  auto S = [&](std::uint32_t y, std::uint32_t x) -> std::uint64_t& {
    return sat[std::size_t{y} * (W + 1) + x];
  };
  for (std::uint32_t y = 0; y < H; ++y) {
    for (std::uint32_t x = 0; x < W; ++x) {
      S(y + 1, x + 1) = (bm.at(y, x) ? 1 : 0) + S(y, x + 1) + S(y + 1, x) - S(y, x);
    }
  }
  auto covered = [&](const Rect& r) {
    return S(r.y1, r.x1) + S(r.y0, r.x0) - S(r.y0, r.x1) - S(r.y1, r.x0);
  };

  Rng rng(seed);
  OccluderResult res;
  std::uint64_t k = rng.below(total);
  for (std::uint32_t y = 0; y < H && res.rect.x1 == 0; ++y) {
    for (std::uint32_t x = 0; x < W; ++x) {
      if (bm.at(y, x) && k-- == 0) {
        res.seed_x = x;
        res.seed_y = y;
        res.rect = {x, y, x + 1, y + 1};
        break;
      }
    }
  }
  const double need = min_fraction * static_cast<double>(total);
  Rect& r = res.rect;
  while (static_cast<double>(covered(r)) <= need) {
    if (r.x0 > 0) --r.x0;
    if (r.y0 > 0) --r.y0;
    if (r.x1 < W) ++r.x1;
    if (r.y1 < H) ++r.y1;
  }
  const auto w = r.width(), h = r.height();
  auto grow = [&](std::uint32_t dim) {
    const auto limit = static_cast<std::uint64_t>(std::floor(max_expand * dim));
    return static_cast<std::uint32_t>(rng.below(limit + 1));
  };
  const std::uint32_t gl = grow(w), gt = grow(h), gr = grow(w), gb = grow(h);
  r.x0 -= std::min(r.x0, gl);
  r.y0 -= std::min(r.y0, gt);
  r.x1 = std::min(W, r.x1 + gr);
  r.y1 = std::min(H, r.y1 + gb);
  res.coverage = static_cast<double>(covered(r)) / static_cast<double>(total);
  return res;
}

double fraction_inside(const MaskRLE& object, const Rect& r) {
  const Bitmask bm = decode_rle(object);
  std::uint64_t in = 0, total = 0;
  for (std::uint32_t y = 0; y < bm.height(); ++y) {
    for (std::uint32_t x = 0; x < bm.width(); ++x) {
      if (!bm.at(y, x)) continue;
      ++total;
      if (r.contains(x, y)) ++in;
    }
  }
  if (total == 0) throw InvalidArgument("fraction_inside on an empty mask");
  return static_cast<double>(in) / static_cast<double>(total);
}

namespace {

void check_rect(const Rect& r, std::uint32_t w, std::uint32_t h) {
  if (r.x0 >= r.x1 || r.y0 >= r.y1 || r.x1 > w || r.y1 > h) {
    throw InvalidArgument("rectangle outside image");
  }
}

}  // namespace

Image crop_image(const Image& image, const Rect& r) {
  check_rect(r, image.width(), image.height());
  Image out(r.width(), r.height());
  for (std::uint32_t y = 0; y < r.height(); ++y) {
    for (std::uint32_t x = 0; x < r.width(); ++x) out.set(x, y, image.at(r.x0 + x, r.y0 + y));
  }
  return out;
}

Image paint_rect(const Image& image, const Rect& r, Rgb color) {
  check_rect(r, image.width(), image.height());
  Image out = image;
  for (std::uint32_t y = r.y0; y < r.y1; ++y) {
    for (std::uint32_t x = r.x0; x < r.x1; ++x) out.set(x, y, color);
  }
  return out;
}

MaskRLE crop_mask(const MaskRLE& mask, const Rect& r) {
  check_rect(r, mask.size.width, mask.size.height);
  const Bitmask bm = decode_rle(mask);
  Bitmask out(MaskSize{r.height(), r.width()});
  for (std::uint32_t y = 0; y < r.height(); ++y) {
    for (std::uint32_t x = 0; x < r.width(); ++x) {
      if (bm.at(r.y0 + y, r.x0 + x)) out.set(y, x);
    }
  }
  return encode_rle(out);
}

// ---- suites ----

nlohmann::json to_json(const Rect& r) {
  return {{"x0", r.x0}, {"y0", r.y0}, {"x1", r.x1}, {"y1", r.y1}};
}

namespace {

nlohmann::json edits_json(const SpellingOutcome& o, std::string_view region) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : o.edits) {
    nlohmann::json j = {{"region", region},
                        {"segment", e.segment},
                        {"position", e.position},
                        {"op", to_string(e.op)}};
    if (e.op == EditOp::Insert) j["inserted"] = std::string(1, e.inserted);
    if (e.op == EditOp::Transpose) j["partner"] = e.partner;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string joined_expressions(const Sample& s) {
  std::string out;
  for (std::size_t i = 0; i < s.expressions.size(); ++i) {
    if (i > 0) out += " and ";
    out += s.expressions[i];
  }
  return out;
}

}  // namespace

std::uint64_t sample_seed(const Sample& sample, std::uint64_t seed) {
  return mix_seed(seed, text::fnv1a64(sample.sample_id));
}

std::vector<VariationItem> build_vqa_suite(const Sample& sample, const SuiteOptions& opts,
                                           Rewriter& rewriter) {
  const std::uint64_t base = sample_seed(sample, opts.seed);
  const std::string instruction(prompts::kOptionInstruction);
  const std::string choices = prompts::lettered_choices(sample.choices);
  std::vector<VariationItem> items;

  for (std::size_t i = 0; i < 10; ++i) {
    VariationItem it;
    it.spec = {PerturbationKind::Spelling, mix_seed(base, 100 + i),
               {{"n_sites", opts.n_sites}, {"index", i}}};
    const SpellingResult r =
        spelling_perturb(sample.question, sample.choices, instruction, it.spec.seed, opts.n_sites);
    it.prompt = r.prompt();
    it.shortfall = r.joint.shortfall() + r.instruction_edits.shortfall();
    it.edits = edits_json(r.joint, "question_choices");
    for (auto& e : edits_json(r.instruction_edits, "instruction")) it.edits.push_back(e);
    items.push_back(std::move(it));
  }
  for (std::size_t t = 1; t <= prompts::kVqaTemplateCount; ++t) {
    VariationItem it;
    it.spec = {PerturbationKind::Template, 0, {{"template_id", t}}};
    it.prompt = prompts::apply_vqa_template(t, sample.question, choices, instruction);
    items.push_back(std::move(it));
  }
  for (std::size_t v = 0; v < 10; ++v) {
    VariationItem it;
    it.spec = {PerturbationKind::Paraphrase, 0, {{"variant", v}, {"rewriter", rewriter.id()}}};
    const std::string q = paraphrase(sample.question, rewriter, v);
    it.prompt = prompts::question_with_mark(q) + " " + choices + " " + instruction;
    items.push_back(std::move(it));
  }
  return items;
}

std::vector<VariationItem> build_visual_suite(const Sample& sample, const SuiteOptions& opts) {
  if (sample.is_none_expression() || sample.gt_masks.empty()) {
    throw InvalidArgument("sample " + sample.sample_id + " has no object for visual variants");
  }
  const MaskRLE object = mask_union(sample.gt_masks);
  if (is_empty(object)) {
    throw InvalidArgument("sample " + sample.sample_id + " has an empty object mask");
  }
  const std::uint64_t base = sample_seed(sample, opts.seed);
  std::vector<VariationItem> items;
  for (std::size_t i = 0; i < 4; ++i) {
    VariationItem it;
    it.spec = {PerturbationKind::GuidedCrop, mix_seed(base, 300 + i),
               {{"min_object_fraction", 0.5}, {"index", i}}};
    const CropResult c = guided_crop(object, it.spec.seed);
    it.rect = c.keep;
    it.audit_fraction = 1.0 - fraction_inside(object, c.keep);
    it.fallback = c.fallback;
    it.spec.params["side"] = to_string(c.side);
    items.push_back(std::move(it));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    VariationItem it;
    it.spec = {PerturbationKind::GuidedMask, mix_seed(base, 400 + i),
               {{"min_object_fraction", 0.5}, {"max_expand", 0.2}, {"index", i}}};
    const OccluderResult o = guided_mask(object, it.spec.seed);
    it.rect = o.rect;
    it.audit_fraction = fraction_inside(object, o.rect);
    items.push_back(std::move(it));
  }
  return items;
}

std::vector<VariationItem> build_grounding_suite(const Sample& sample, const SuiteOptions& opts) {
  const std::uint64_t base = sample_seed(sample, opts.seed);
  const std::string expr = joined_expressions(sample);
  std::vector<VariationItem> items;
  for (std::size_t t = 1; t <= prompts::kGroundingTemplateCount; ++t) {
    for (std::size_t s = 0; s < 2; ++s) {
      VariationItem it;
      it.spec = {PerturbationKind::GroundingSpelling, mix_seed(base, 200 + 2 * (t - 1) + s),
                 {{"template_id", t}, {"index", s}, {"n_sites", opts.n_sites}}};
      const SpellingOutcome o =
          grounding_spelling_perturb(t, expr, opts.modality, it.spec.seed, opts.n_sites);
      it.prompt = o.joined();
      it.shortfall = o.shortfall();
      it.edits = edits_json(o, "prompt");
      items.push_back(std::move(it));
    }
  }
  return items;
}

std::vector<VariationItem> build_expression_variants(const Sample& sample,
                                                     const SuiteOptions& opts,
                                                     std::size_t count) {
  const std::uint64_t base = sample_seed(sample, opts.seed);
  const std::string expr = joined_expressions(sample);
  std::vector<VariationItem> items;
  for (std::size_t i = 0; i < count; ++i) {
    VariationItem it;
    it.spec = {PerturbationKind::ExpressionSpelling, mix_seed(base, 500 + i),
               {{"template_id", 1}, {"index", i}, {"n_sites", opts.n_sites}}};
    const SpellingOutcome o =
        expression_spelling_perturb(1, expr, opts.modality, it.spec.seed, opts.n_sites);
    it.prompt = o.joined();
    it.shortfall = o.shortfall();
    it.edits = edits_json(o, "expression");
    items.push_back(std::move(it));
  }
  return items;
}

VariationSuite build_variation_suite(const Sample& sample, const SuiteOptions& opts,
                                     Rewriter& rewriter) {
  VariationSuite suite;
  suite.vqa_language = build_vqa_suite(sample, opts, rewriter);
  suite.visual = build_visual_suite(sample, opts);
  suite.grounding_language = build_grounding_suite(sample, opts);
  return suite;
}

nlohmann::json to_json(const VariationItem& item) {
  nlohmann::json j = {{"kind", to_string(item.spec.kind)},
                      {"seed", item.spec.seed},
                      {"params", item.spec.params}};
  if (item.prompt) j["prompt"] = *item.prompt;
  if (item.rect) j["rect"] = to_json(*item.rect);
  if (item.audit_fraction) j["audit_fraction"] = *item.audit_fraction;
  if (item.fallback) j["fallback"] = true;
  if (item.shortfall > 0) j["shortfall"] = item.shortfall;
  if (!item.edits.empty()) j["edits"] = item.edits;
  return j;
}

}  // namespace pixground
