// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pixground/attention.h"
#include "pixground/image.h"
#include "pixground/judge.h"
#include "pixground/prompts.h"
#include "pixground/render.h"
#include "pixground/rle.h"
#include "pixground/run.h"

namespace pixground {

struct CandidateMask {
  PhraseSpan phrase;
  std::size_t phrase_index = 0;
  AttentionPoint point;
  MaskRLE mask;
  int segmenter_rank = 1;  // 1..3, segmenter's own ordering
};

enum class Strategy { Oracle, AttendSegment, Automatic };
std::string to_string(Strategy s);          // "oracle", "a+s", "auto"
Strategy parse_strategy(std::string_view s);

struct SelectionResult {
  Strategy strategy = Strategy::Oracle;
  // Empty means the prediction is the empty mask. Oracle pairs and
  // per-expression unions hold more than one entry.
  std::vector<CandidateMask> chosen;
  std::optional<std::string> chosen_phrase_text;
  // IoU against the gt union; filled by the oracle only.
  std::optional<double> iou;

  bool empty_prediction() const { return chosen.empty(); }
  MaskRLE predicted_mask(MaskSize size) const;
};

// Source of segmenter masks for a prompt point.
class MaskProvider {
 public:
  virtual ~MaskProvider() = default;
  virtual std::vector<MaskRLE> masks_for(const AttentionPoint& point) = 0;
};

// Looks the point up among recorded segmenter prompts (pixel coordinates
// matched within `tolerance`).
class PromptMaskProvider : public MaskProvider {
 public:
  explicit PromptMaskProvider(const SampleMasks& masks, double tolerance = 1e-3)
      : masks_(masks), tolerance_(tolerance) {}
  std::vector<MaskRLE> masks_for(const AttentionPoint& point) override;

 private:
  const SampleMasks& masks_;
  double tolerance_;
};

// One point per phrase (rank-1 attention cell), k segmenter masks per point.
// Candidates come out ordered by phrase, then segmenter rank.
std::vector<CandidateMask> expand_candidates(std::span<const PhraseSpan> phrases,
                                             std::span<const Grid> phrase_grids,
                                             MaskProvider& segmenter, MaskSize image,
                                             std::size_t k_masks = 3);

// Phrase grids from normalized attention, then expand_candidates.
std::vector<CandidateMask> mine_candidates(const NormalizedAttention& norm,
                                           std::span<const PhraseSpan> phrases,
                                           MaskProvider& segmenter, MaskSize image,
                                           std::size_t k_masks = 3);

// Highest IoU against the union of gt masks. With allow_pairs and two or
// more gt masks, the best pair of candidates is chosen instead.
SelectionResult oracle_select(std::span<const CandidateMask> candidates,
                              std::span<const MaskRLE> gt_masks, bool allow_pairs = true);

inline constexpr double kSimilarityThreshold = 0.7;

// Most similar phrase (earliest on ties) and its rank-1 mask; empty when the
// best similarity is below threshold. `expression_index` selects an entry of
// PhraseSpan::similarities; otherwise similarity_to_expr is used.
SelectionResult attend_segment_select(std::span<const PhraseSpan> phrases,
                                      std::span<const CandidateMask> candidates,
                                      double threshold = kSimilarityThreshold,
                                      std::optional<std::size_t> expression_index = {});

struct TournamentConfig {
  std::size_t group_size = 4;
  std::string pick_template{prompts::kDefaultPickTemplate};
  OverlayStyle style;
};

struct TournamentLog {
  bool exists = true;
  std::vector<std::vector<std::size_t>> groups;  // candidate indices
  std::vector<std::size_t> winners;              // one per group
  std::optional<std::size_t> final_winner;
  std::size_t pick_calls = 0;
};

// Existence check on the plain image, then one pick per group of up to
// `group_size` overlays and a final pick among group winners. Judge failures
// rethrow as JudgeError carrying the partial tournament.
SelectionResult automatic_select(std::span<const CandidateMask> candidates, JudgeClient& judge,
                                 std::string_view expression, const Image& image,
                                 const TournamentConfig& config = {},
                                 TournamentLog* log = nullptr);

// Contiguous groups of near-equal size, ceil(n / group_size) of them.
std::vector<std::vector<std::size_t>> tournament_groups(std::size_t n, std::size_t group_size);

// Concatenates per-expression results (duplicates dropped) into one prediction.
SelectionResult combine_results(Strategy strategy, std::span<const SelectionResult> parts);

}  // namespace pixground
