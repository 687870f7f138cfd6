#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "sdgar/types.hpp"

namespace sdgar {

// Matrix-factorization scorer g(c,i) = <context_emb[c], item_emb[i]> + bias[i].
// The preference probability is sigmoid(g).
struct DiscriminatorParams {
  RowMatrix context_emb;  // N x d
  RowMatrix item_emb;     // M x d
  Vector item_bias;       // M

  Index num_contexts() const { return context_emb.rows(); }
  Index num_items() const { return item_emb.rows(); }
  Index dim() const { return context_emb.cols(); }

  // Embeddings ~ uniform(-0.01, 0.01), biases zero.
  static DiscriminatorParams init(Index num_contexts, Index num_items,
                                  Index dim, Rng& rng);
};

Real score(const DiscriminatorParams& params, Index c, Index i);

// f_c(i) = -log(1 - sigmoid(g)) = softplus(g), evaluated stably.
Real softplus_f(const DiscriminatorParams& params, Index c, Index i);

// A sampled negative set for one context with its self-normalized importance
// weights: w_j proportional to exp(f_c(j)/T - log_proposal[j]).
struct WeightedNegatives {
  Index context = -1;
  std::vector<Index> items;
  Vector log_proposal;
  Vector weights;
  Real temperature = 1.0;
};

WeightedNegatives importance_weights(const DiscriminatorParams& params, Index c,
                                     std::vector<Index> items,
                                     Vector log_proposal, Real temperature);

// Per-context summand of the importance-weighted objective:
//   (1/|pos|) sum softplus(-g_pos) + sum_j w_j softplus(g_neg_j).
Real loss_contribution(const DiscriminatorParams& params, Index c,
                       std::span<const Index> positives,
                       const WeightedNegatives& negatives);

// Adam moments shaped like the parameters; only rows touched by a batch are
// read or written.
struct OptimizerState {
  RowMatrix m_context, v_context;
  RowMatrix m_item, v_item;
  Vector m_bias, v_bias;
  std::int64_t step = 0;

  Real learning_rate = 1e-3;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real epsilon = 1e-8;
  Real l2_coeff = 0.03;

  static OptimizerState init(Index num_contexts, Index num_items, Index dim);
};

struct BatchEntry {
  Index context = -1;
  std::span<const Index> positives;
  WeightedNegatives negatives;
};

// Analytic gradient of sum_c loss_contribution(c) + l2_coeff * ||touched||^2
// over the rows and biases the batch touches.
struct BatchGradients {
  std::unordered_map<Index, Vector> context;
  std::unordered_map<Index, Vector> item;
  std::unordered_map<Index, Real> bias;
  Real loss = 0.0;  // batch loss without the L2 term
};

// With stop_gradient_through_weights the weights are constants; otherwise the
// softmax dependence of w on f is differentiated as well. Throws NumericError
// naming the context on a non-finite gradient.
BatchGradients compute_gradients(const DiscriminatorParams& params,
                                 std::span<const BatchEntry> batch,
                                 Real l2_coeff,
                                 bool stop_gradient_through_weights = true);

// One adaptive-gradient step on the batch; only touched rows move. Returns
// the batch loss (without the L2 term).
Real grad_and_step(DiscriminatorParams& params, OptimizerState& opt,
                   std::span<const BatchEntry> batch,
                   bool stop_gradient_through_weights = true);

}  // namespace sdgar
