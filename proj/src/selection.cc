// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/selection.h"

#include <cmath>
#include <nlohmann/json.hpp>

#include "pixground/error.h"
#include "pixground/masks.h"

namespace pixground {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Oracle: return "oracle";
    case Strategy::AttendSegment: return "a+s";
    case Strategy::Automatic: return "auto";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "oracle") return Strategy::Oracle;
  if (s == "a+s" || s == "attend_segment") return Strategy::AttendSegment;
  if (s == "auto" || s == "automatic") return Strategy::Automatic;
  throw InvalidArgument("unknown strategy '" + std::string(s) + "' (oracle|a+s|auto)");
}

MaskRLE SelectionResult::predicted_mask(MaskSize size) const {
  if (chosen.empty()) return MaskRLE::empty(size);
  std::vector<MaskRLE> masks;
  masks.reserve(chosen.size());
  for (const auto& c : chosen) masks.push_back(c.mask);
  MaskRLE u = mask_union(masks);
  if (u.size != size) throw InvalidArgument("predicted mask size differs from image size");
  return u;
}

std::vector<MaskRLE> PromptMaskProvider::masks_for(const AttentionPoint& point) {
  for (const auto& p : masks_.prompts) {
    if (std::abs(p.x - point.image_x) <= tolerance_ &&
        std::abs(p.y - point.image_y) <= tolerance_) {
      return p.masks;
    }
  }
  throw SchemaError("no segmenter masks recorded for point (" + std::to_string(point.image_x) +
                    ", " + std::to_string(point.image_y) + ")");
}

std::vector<CandidateMask> expand_candidates(std::span<const PhraseSpan> phrases,
                                             std::span<const Grid> phrase_grids,
                                             MaskProvider& segmenter, MaskSize image,
                                             std::size_t k_masks) {
  if (phrases.size() != phrase_grids.size()) {
    throw InvalidArgument("phrase/grid count mismatch");
  }
  std::vector<CandidateMask> out;
  out.reserve(phrases.size() * k_masks);
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    const AttentionPoint pt = argmax_point(phrase_grids[i], 1, image);
    std::vector<MaskRLE> masks = segmenter.masks_for(pt);
    if (masks.size() != k_masks) {
      throw SchemaError("segmenter returned " + std::to_string(masks.size()) +
                        " masks for phrase '" + phrases[i].text + "', expected " +
                        std::to_string(k_masks));
    }
    for (std::size_t r = 0; r < masks.size(); ++r) {
      if (masks[r].size != image) {
        throw SchemaError("segmenter mask size differs from image size for phrase '" +
                          phrases[i].text + "'");
      }
      out.push_back({phrases[i], i, pt, std::move(masks[r]), static_cast<int>(r + 1)});
    }
  }
  return out;
}

std::vector<CandidateMask> mine_candidates(const NormalizedAttention& norm,
                                           std::span<const PhraseSpan> phrases,
                                           MaskProvider& segmenter, MaskSize image,
                                           std::size_t k_masks) {
  std::vector<Grid> grids;
  grids.reserve(phrases.size());
  for (const auto& p : phrases) grids.push_back(phrase_attention(norm, p));
  return expand_candidates(phrases, grids, segmenter, image, k_masks);
}

namespace {

// Candidate order used for tie-breaks: earliest phrase, then lowest rank.
bool precedes(const CandidateMask& a, const CandidateMask& b) {
  if (a.phrase_index != b.phrase_index) return a.phrase_index < b.phrase_index;
  return a.segmenter_rank < b.segmenter_rank;
}

}  // namespace

SelectionResult oracle_select(std::span<const CandidateMask> candidates,
                              std::span<const MaskRLE> gt_masks, bool allow_pairs) {
  SelectionResult res;
  res.strategy = Strategy::Oracle;

  std::optional<MaskRLE> gt;
  if (!gt_masks.empty()) gt = mask_union(gt_masks);
  if (!gt || is_empty(*gt)) {
    res.iou = 1.0;  // empty prediction against empty gt
    return res;
  }
  if (candidates.empty()) {
    res.iou = 0.0;
    return res;
  }

  if (allow_pairs && gt_masks.size() >= 2 && candidates.size() >= 2) {
    std::vector<MaskRLE> masks;
    masks.reserve(candidates.size());
    for (const auto& c : candidates) masks.push_back(c.mask);
    const PairChoice pc = best_pair_union(masks, *gt);
    res.chosen = {candidates[pc.first], candidates[pc.second]};
    res.chosen_phrase_text = candidates[pc.first].phrase.text;
    res.iou = pc.iou;
    return res;
  }

  std::size_t best = 0;
  double best_iou = iou(candidates[0].mask, *gt);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = iou(candidates[i].mask, *gt);
    if (v > best_iou || (v == best_iou && precedes(candidates[i], candidates[best]))) {
      best = i;
      best_iou = v;
    }
  }
  res.chosen = {candidates[best]};
  res.chosen_phrase_text = candidates[best].phrase.text;
  res.iou = best_iou;
  return res;
}

SelectionResult attend_segment_select(std::span<const PhraseSpan> phrases,
                                      std::span<const CandidateMask> candidates,
                                      double threshold,
                                      std::optional<std::size_t> expression_index) {
  SelectionResult res;
  res.strategy = Strategy::AttendSegment;
  std::optional<std::size_t> best;
  double best_sim = 0.0;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    std::optional<double> sim;
    if (expression_index && *expression_index < phrases[i].similarities.size()) {
      sim = phrases[i].similarities[*expression_index];
    } else {
      sim = phrases[i].similarity_to_expr;
    }
    if (!sim) {
      throw SchemaError("phrase '" + phrases[i].text + "' carries no similarity score");
    }
    if (!best || *sim > best_sim) {
      best = i;
      best_sim = *sim;
    }
  }
  if (!best || best_sim < threshold) return res;
  for (const auto& c : candidates) {
    if (c.phrase_index == *best && c.segmenter_rank == 1) {
      res.chosen = {c};
      res.chosen_phrase_text = c.phrase.text;
      return res;
    }
  }
  throw SchemaError("no rank-1 candidate for phrase '" + phrases[*best].text + "'");
}

std::vector<std::vector<std::size_t>> tournament_groups(std::size_t n, std::size_t group_size) {
  if (group_size == 0) throw InvalidArgument("tournament group size must be positive");
  std::vector<std::vector<std::size_t>> groups;
  if (n == 0) return groups;
  const std::size_t g = (n + group_size - 1) / group_size;
  const std::size_t base = n / g;
  const std::size_t extra = n % g;
  std::size_t next = 0;
  for (std::size_t k = 0; k < g; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    std::vector<std::size_t> grp(len);
    for (auto& v : grp) v = next++;
    groups.push_back(std::move(grp));
  }
  return groups;
}

namespace {

nlohmann::json log_json(const TournamentLog& log) {
  nlohmann::json j;
  j["exists"] = log.exists;
  j["groups"] = log.groups;
  j["winners"] = log.winners;
  j["final_winner"] = log.final_winner ? nlohmann::json(*log.final_winner) : nlohmann::json();
  j["pick_calls"] = log.pick_calls;
  return j;
}

}  // namespace

SelectionResult automatic_select(std::span<const CandidateMask> candidates, JudgeClient& judge,
                                 std::string_view expression, const Image& image,
                                 const TournamentConfig& config, TournamentLog* log_out) {
  TournamentLog log;
  SelectionResult res;
  res.strategy = Strategy::Automatic;

  auto fail = [&](const JudgeError& e) -> JudgeError {
    nlohmann::json t = e.transcript();
    if (!t.is_array()) t = nlohmann::json::array({t});
    t.push_back({{"tournament", log_json(log)}});
    return JudgeError(e.what(), std::move(t));
  };

  try {
    const Image plain[] = {image};
    log.exists = judge.ask_yes_no(plain, prompts::existence_prompt(expression));
    if (!log.exists || candidates.empty()) {
      if (log_out) *log_out = log;
      return res;
    }
    if (candidates.size() == 1) {
      log.final_winner = 0;
      res.chosen = {candidates[0]};
      res.chosen_phrase_text = candidates[0].phrase.text;
      if (log_out) *log_out = log;
      return res;
    }

    const std::string prompt = prompts::pick_prompt(expression, config.pick_template);
    auto overlay = [&](std::size_t i) {
      const auto& c = candidates[i];
      return render_candidate(image, c.mask, c.point.image_x, c.point.image_y, config.style);
    };
    auto pick = [&](const std::vector<std::size_t>& ids) {
      std::vector<Image> tiles;
      tiles.reserve(ids.size());
      for (auto i : ids) tiles.push_back(overlay(i));
      ++log.pick_calls;
      const std::size_t k = judge.pick_index(tiles, prompt);
      if (k >= ids.size()) throw JudgeError("judge picked index out of range");
      return ids[k];
    };

    log.groups = tournament_groups(candidates.size(), config.group_size);
    for (const auto& grp : log.groups) {
      log.winners.push_back(grp.size() == 1 ? grp[0] : pick(grp));
    }
    log.final_winner = log.winners.size() == 1 ? log.winners[0] : pick(log.winners);
  } catch (const JudgeError& e) {
    throw fail(e);
  }

  res.chosen = {candidates[*log.final_winner]};
  res.chosen_phrase_text = candidates[*log.final_winner].phrase.text;
  if (log_out) *log_out = log;
  return res;
}

SelectionResult combine_results(Strategy strategy, std::span<const SelectionResult> parts) {
  SelectionResult res;
  res.strategy = strategy;
  for (const auto& p : parts) {
    for (const auto& c : p.chosen) {
      bool dup = false;
      for (const auto& have : res.chosen) {
        if (have.phrase_index == c.phrase_index && have.segmenter_rank == c.segmenter_rank) {
          dup = true;
          break;
        }
      }
      if (!dup) res.chosen.push_back(c);
    }
    if (!res.chosen_phrase_text && p.chosen_phrase_text) {
      res.chosen_phrase_text = p.chosen_phrase_text;
    }
  }
  return res;
}

}  // namespace pixground
