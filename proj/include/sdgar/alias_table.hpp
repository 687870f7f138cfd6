#pragma once

#include <Eigen/Core>

#include <vector>

#include "sdgar/types.hpp"

namespace sdgar {

// Vose alias structure: O(n) construction, O(1) draws from a fixed discrete
// distribution. Immutable after build; safe for concurrent reads as long as
// each reader owns its Rng.
struct AliasTable {
  std::vector<Real> prob;        // acceptance cutoff per slot
  std::vector<Index> alias;      // fallback category per slot
  std::vector<Real> source_pmf;  // normalized input weights, kept for checks

  Index size() const { return static_cast<Index>(prob.size()); }
};

// Weights must be finite, nonnegative, with at least one strictly positive
// entry. They are normalized internally. Throws InvalidDistributionError.
AliasTable build_alias(std::vector<Real> weights);

template <class Derived>
AliasTable build_alias(const Eigen::DenseBase<Derived>& weights) {
  std::vector<Real> w(static_cast<std::size_t>(weights.size()));
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    w[static_cast<std::size_t>(i)] = weights.derived()(i);
  }
  return build_alias(std::move(w));
}

// One uniform slot pick plus one biased coin.
inline Index draw(const AliasTable& table, Rng& rng) {
  const Index slot = draw_index(rng, table.size());
  const std::size_t s = static_cast<std::size_t>(slot);
  return draw_unit(rng) < table.prob[s] ? slot : table.alias[s];
}

// The pmf implied by (prob, alias); equals source_pmf up to float drift.
std::vector<Real> reconstruct_pmf(const AliasTable& table);

}  // namespace sdgar
