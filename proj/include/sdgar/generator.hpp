#pragma once

#include <span>
#include <vector>

#include "sdgar/alias_table.hpp"
#include "sdgar/discriminator.hpp"
#include "sdgar/types.hpp"

namespace sdgar {

// Rank-K decomposable proposal Q(i|c) = sum_k X(c,k) Y(i,k): rows of X are
// distributions over latent states, columns of Y are distributions over
// items.
struct GeneratorParams {
  RowMatrix X;  // N x K, each row on the simplex
  RowMatrix Y;  // M x K, each column on the simplex
  Index num_contexts() const { return X.rows(); }
  Index num_items() const { return Y.rows(); }
  Index num_states() const { return X.cols(); }

  // Entries ~ uniform(0,1), then rows of X / columns of Y normalized.
  static GeneratorParams init(Index num_contexts, Index num_items,
                              Index num_states, Rng& rng);
};

// Alias tables for the four conditional families, plus the normalizers that
// define the reverse conditionals. Immutable snapshot; rebuilt after updates.
struct GeneratorTables {
  std::vector<AliasTable> state_given_context;  // N tables over K, from X rows
  std::vector<AliasTable> item_given_state;     // K tables over M, from Y cols
  std::vector<AliasTable> context_given_state;  // K tables over N, from X cols
  std::vector<AliasTable> state_given_item;     // M tables over K, from Y rows
  Vector x_col_sum;  // K
  Vector y_row_sum;  // M
};

// Exact sums a generator-update round produces; also the container the exact
// oracles fill on small instances.
struct GeneratorEstimates {
  Vector mu;      // N
  RowMatrix b;    // N x K
  Vector log_z;   // N
  RowMatrix d;    // K x M
};

Real q_item_prob(const GeneratorParams& gen, Index c, Index i);

// Q(c|i) = sum_k P(k|i) P(c|k); the overload without tables recomputes the
// column sums of X (test convenience).
Real q_context_prob(const GeneratorParams& gen, const GeneratorTables& tables,
                    Index i, Index c);
Real q_context_prob(const GeneratorParams& gen, Index i, Index c);

// Two-step draws: k from X row, then item from Y column (two alias lookups).
std::vector<Index> sample_items(const GeneratorParams& gen,
                                const GeneratorTables& tables, Index c, Index n,
                                Rng& rng);

// Reverse two-step draws: k from P(k|i), then context from P(c|k).
std::vector<Index> sample_contexts(const GeneratorParams& gen,
                                   const GeneratorTables& tables, Index i,
                                   Index n, Rng& rng);

// Self-normalized estimate of E[f_c] under the tempered-softmax target, from
// a sample drawn off Q(.|c).
Real estimate_mu(const DiscriminatorParams& disc, const GeneratorParams& gen,
                 Index c, std::span<const Index> sample, Real temperature);

// Self-normalized estimate of sum_i y_i P*(i|c) |f_c(i) - mu_c|; length K.
Vector estimate_b(const DiscriminatorParams& disc, const GeneratorParams& gen,
                  Index c, std::span<const Index> sample, Real mu_c,
                  Real temperature);

// Log of the sample-mean estimate of Z(c) = sum_i exp(f_c(i)/T); the
// decomposable proposal is exactly normalized so no Z_Q correction appears.
Real estimate_log_z(const DiscriminatorParams& disc, const GeneratorParams& gen,
                    Index c, std::span<const Index> sample, Real temperature);

struct DEstimateStats {
  Index skipped = 0;  // contexts dropped for zero proposal mass
};

// Unnormalized importance estimate of d(.,i) from contexts drawn off Q(.|i);
// mu and log_z are the per-context estimates of the same round. Length K.
Vector estimate_d(const DiscriminatorParams& disc, const GeneratorParams& gen,
                  const GeneratorTables& tables, Index i,
                  std::span<const Index> contexts, const Vector& mu,
                  const Vector& log_z, Real temperature,
                  DEstimateStats* stats = nullptr);

// Closed-form simplex updates: max-shifted softmax of the estimate over the
// regularization strength, floored at 1e-12 so no category becomes
// unreachable by the alias tables.
Vector update_x(const Eigen::Ref<const Vector>& b_c, Real lambda_x);
Vector update_y(const Eigen::Ref<const Vector>& d_k, Real lambda_y);

// Rebuilds all four table families from the current X, Y. O(NK + MK).
GeneratorTables rebuild_tables(const GeneratorParams& gen);

}  // namespace sdgar
