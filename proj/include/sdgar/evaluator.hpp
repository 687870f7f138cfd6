#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sdgar/dataset.hpp"
#include "sdgar/discriminator.hpp"
#include "sdgar/types.hpp"

namespace sdgar {

// Ranking quality over held-out positives; contexts with no held-out
// positives are excluded from both the map and the mean.
struct EvalReport {
  Index k = 0;
  std::vector<std::pair<Index, Real>> per_context_ndcg;
  Real mean_ndcg = 0.0;
  Index num_evaluated = 0;
};

// Top-k items by g(c,.) descending, ties by lower index, skipping `exclude`
// (sorted). Returns fewer than k when fewer remain.
std::vector<Index> rank_items(const DiscriminatorParams& disc, Index c,
                              const std::vector<Index>& exclude, Index k);

// Binary relevance, gain 1, discount log2(rank+1), ideal DCG truncated at
// min(k, |relevant|). `relevant` must be sorted.
Real ndcg_at_k(std::span<const Index> ranked, const std::vector<Index>& relevant,
               Index k);

// Scores eval_positives per context, optionally masking that context's
// training positives out of the ranking.
EvalReport evaluate_against(const DiscriminatorParams& disc,
                            const InteractionDataset& train,
                            const InteractionDataset& eval_positives, Index k,
                            bool mask_train = true, Index num_threads = 1);

// Test-set evaluation of a split.
EvalReport evaluate(const DiscriminatorParams& disc, const DatasetSplit& split,
                    Index k, bool mask_train = true, Index num_threads = 1);

}  // namespace sdgar
