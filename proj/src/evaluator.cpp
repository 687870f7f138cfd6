#include "sdgar/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdgar/errors.hpp"
#include "sdgar/parallel.hpp"

namespace sdgar {

namespace {

// Top-k of a scored row: score descending, index ascending on ties.
std::vector<Index> top_k_from_scores(const Vector& scores,
                                     const std::vector<Index>& exclude,
                                     Index k) {
  const Index m = scores.size();
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    if (!std::binary_search(exclude.begin(), exclude.end(), i)) {
      order.push_back(i);
    }
  }
  const auto better = [&scores](Index a, Index b) {
    return scores(a) != scores(b) ? scores(a) > scores(b) : a < b;
  };
  const Index take = std::min<Index>(k, static_cast<Index>(order.size()));
  std::partial_sort(order.begin(), order.begin() + take, order.end(), better);
  order.resize(static_cast<std::size_t>(take));
  return order;
}

}  // namespace

std::vector<Index> rank_items(const DiscriminatorParams& disc, Index c,
                              const std::vector<Index>& exclude, Index k) {
  if (k < 1) throw ContractError("rank_items: k must be >= 1");
  Vector scores = disc.item_emb * disc.context_emb.row(c).transpose();
  scores += disc.item_bias;
  return top_k_from_scores(scores, exclude, k);
}

Real ndcg_at_k(std::span<const Index> ranked, const std::vector<Index>& relevant,
               Index k) {
  if (k < 1) throw ContractError("ndcg_at_k: k must be >= 1");
  if (relevant.empty()) return 0.0;

  Real dcg = 0.0;
  const Index depth = std::min<Index>(k, static_cast<Index>(ranked.size()));
  for (Index r = 1; r <= depth; ++r) {
    if (std::binary_search(relevant.begin(), relevant.end(),
                           ranked[static_cast<std::size_t>(r - 1)])) {
      dcg += 1.0 / std::log2(static_cast<Real>(r) + 1.0);
    }
  }
  Real idcg = 0.0;
  const Index ideal = std::min<Index>(k, static_cast<Index>(relevant.size()));
  for (Index r = 1; r <= ideal; ++r) {
    idcg += 1.0 / std::log2(static_cast<Real>(r) + 1.0);
  }
  return dcg / idcg;
}

EvalReport evaluate_against(const DiscriminatorParams& disc,
                            const InteractionDataset& train,
                            const InteractionDataset& eval_positives, Index k,
                            bool mask_train, Index num_threads) {
  const Index n = eval_positives.num_contexts;
  if (n > disc.num_contexts() || eval_positives.num_items > disc.num_items()) {
    throw ShapeError("evaluate: dataset (" + std::to_string(n) + " contexts, " +
                     std::to_string(eval_positives.num_items) +
                     " items) exceeds model (" +
                     std::to_string(disc.num_contexts()) + ", " +
                     std::to_string(disc.num_items()) + ")");
  }
  EvalReport report;
  report.k = k;

  std::vector<Real> ndcg(static_cast<std::size_t>(n),
                         std::numeric_limits<Real>::quiet_NaN());
  static const std::vector<Index> kNoExclude;

  // Chunked GEMM: score a block of contexts against the item table at once,
  // then take per-context top-k.
  const Index block = 128;
  const Index num_blocks = (n + block - 1) / block;
  parallel_for(num_blocks, num_threads, [&](Index bi) {
    const Index lo = bi * block;
    const Index hi = std::min(n, lo + block);
    Matrix scores = disc.item_emb * disc.context_emb.middleRows(lo, hi - lo).transpose();
    for (Index c = lo; c < hi; ++c) {
      const auto& rel = eval_positives.positives[static_cast<std::size_t>(c)];
      if (rel.empty()) continue;
      Vector col = scores.col(c - lo) + disc.item_bias;
      const auto& exclude =
          mask_train ? train.positives[static_cast<std::size_t>(c)] : kNoExclude;
      const auto ranked = top_k_from_scores(col, exclude, k);
      ndcg[static_cast<std::size_t>(c)] = ndcg_at_k(ranked, rel, k);
    }
  });

  Real total = 0.0;
  for (Index c = 0; c < n; ++c) {
    const Real v = ndcg[static_cast<std::size_t>(c)];
    if (std::isnan(v)) continue;
    report.per_context_ndcg.emplace_back(c, v);
    total += v;
    ++report.num_evaluated;
  }
  report.mean_ndcg =
      report.num_evaluated > 0 ? total / static_cast<Real>(report.num_evaluated) : 0.0;
  return report;
}

EvalReport evaluate(const DiscriminatorParams& disc, const DatasetSplit& split,
                    Index k, bool mask_train, Index num_threads) {
  return evaluate_against(disc, split.train, split.test, k, mask_train,
                          num_threads);
}

}  // namespace sdgar
