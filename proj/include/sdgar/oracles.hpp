#pragma once

#include <span>
#include <vector>

#include "sdgar/dataset.hpp"
#include "sdgar/discriminator.hpp"
#include "sdgar/generator.hpp"
#include "sdgar/types.hpp"

namespace sdgar {

// Exhaustive O(NM) computations on small instances; the ground truth the
// sampled estimators and theorem tests are checked against.

struct OracleInstance {
  DiscriminatorParams disc;
  GeneratorParams gen;
  Real temperature = 1.0;
  InteractionDataset dataset;
};

// argmax_i g(c,i), ties broken by lowest index.
Index exact_hard_optimum(const DiscriminatorParams& disc, Index c);

// Tempered softmax of f_c over all items; length M.
Vector exact_soft_optimum(const DiscriminatorParams& disc, Index c, Real t);

// Full-sum objective with the empirical positive distribution (uniform over
// each context's positives) against the given per-context generator
// distributions.
Real exact_objective(const DiscriminatorParams& disc,
                     const std::vector<Vector>& gen_dist,
                     const InteractionDataset& dataset);

// One context's exact delta-method variance sum (without the 1/|S_c| factor):
// sum_i P*(i|c)^2 (f - mu_c)^2 / proposal_i. Returns infinity when the
// proposal has zero mass at a required item.
Real exact_variance_term(const DiscriminatorParams& disc, Index c,
                         const Eigen::Ref<const Vector>& proposal, Real t);

// Full variance across contexts: sum_c variance_term(c) / sample_sizes[c].
// sample_sizes may hold a single broadcast value.
Real exact_variance(const DiscriminatorParams& disc, const GeneratorParams& gen,
                    const InteractionDataset& dataset, Real t,
                    std::span<const Index> sample_sizes);

// One context's contribution to the variance lower bound (without 1/|S_c|):
// (E_{P*} |f - mu_c|)^2.
Real variance_lower_bound_term(const DiscriminatorParams& disc, Index c, Real t);

// Minimum-variance proposal: P*(i|c) |f - mu_c| normalized. Throws when the
// numerator vanishes everywhere.
Vector optimal_proposal(const DiscriminatorParams& disc, Index c, Real t);

// Exact mu_c, b_c, log Z(c) and d(k,i) by full sums.
GeneratorEstimates exact_mu_b_d(const DiscriminatorParams& disc,
                                const GeneratorParams& gen,
                                const InteractionDataset& dataset, Real t);

}  // namespace sdgar
