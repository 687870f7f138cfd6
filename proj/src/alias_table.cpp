#include "sdgar/alias_table.hpp"

#include <cmath>
#include <utility>

#include "sdgar/errors.hpp"

namespace sdgar {

AliasTable build_alias(std::vector<Real> weights) {
  const Index n = static_cast<Index>(weights.size());
  if (n == 0) {
    throw InvalidDistributionError("alias build: empty weight vector");
  }

  Real total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Real w = weights[static_cast<std::size_t>(i)];
    if (std::isnan(w) || w < 0.0) {
      throw InvalidDistributionError(
          "alias build: negative or NaN weight at index " + std::to_string(i));
    }
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InvalidDistributionError(
        "alias build: weights must contain a positive finite entry");
  }

  AliasTable table;
  table.source_pmf = std::move(weights);
  for (auto& w : table.source_pmf) w /= total;

  table.prob.assign(static_cast<std::size_t>(n), 1.0);
  table.alias.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) table.alias[static_cast<std::size_t>(i)] = i;

  // Two-worklist Vose construction over the scaled pmf.
  std::vector<Real> scaled(static_cast<std::size_t>(n));
  std::vector<Index> small, large;
  small.reserve(static_cast<std::size_t>(n));
  large.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    scaled[static_cast<std::size_t>(i)] =
        table.source_pmf[static_cast<std::size_t>(i)] * static_cast<Real>(n);
    (scaled[static_cast<std::size_t>(i)] < 1.0 ? small : large).push_back(i);
  }

  while (!small.empty() && !large.empty()) {
    const Index s = small.back();
    small.pop_back();
    const Index l = large.back();
    large.pop_back();

    table.prob[static_cast<std::size_t>(s)] = scaled[static_cast<std::size_t>(s)];
    table.alias[static_cast<std::size_t>(s)] = l;
    scaled[static_cast<std::size_t>(l)] =
        (scaled[static_cast<std::size_t>(l)] + scaled[static_cast<std::size_t>(s)]) - 1.0;
    (scaled[static_cast<std::size_t>(l)] < 1.0 ? small : large).push_back(l);
  }
  // Residual slots are full by construction; float drift can leave a few in
  // either list. Their prob stays 1.
  return table;
}

std::vector<Real> reconstruct_pmf(const AliasTable& table) {
  const Index n = table.size();
  std::vector<Real> pmf(static_cast<std::size_t>(n), 0.0);
  const Real inv_n = 1.0 / static_cast<Real>(n);
  for (Index i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    pmf[s] += table.prob[s] * inv_n;
    pmf[static_cast<std::size_t>(table.alias[s])] += (1.0 - table.prob[s]) * inv_n;
  }
  return pmf;
}

}  // namespace sdgar
