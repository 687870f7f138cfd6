#include "sdgar/discriminator.hpp"

#include <cmath>
#include <unordered_map>
#include <utility>

#include "sdgar/errors.hpp"
#include "sdgar/math.hpp"

namespace sdgar {

DiscriminatorParams DiscriminatorParams::init(Index num_contexts,
                                              Index num_items, Index dim,
                                              Rng& rng) {
  DiscriminatorParams p;
  p.context_emb.resize(num_contexts, dim);
  p.item_emb.resize(num_items, dim);
  p.item_bias = Vector::Zero(num_items);
  for (Index r = 0; r < num_contexts; ++r) {
    for (Index k = 0; k < dim; ++k) p.context_emb(r, k) = draw_real(rng, -0.01, 0.01);
  }
  for (Index r = 0; r < num_items; ++r) {
    for (Index k = 0; k < dim; ++k) p.item_emb(r, k) = draw_real(rng, -0.01, 0.01);
  }
  return p;
}

Real score(const DiscriminatorParams& params, Index c, Index i) {
  return params.context_emb.row(c).dot(params.item_emb.row(i)) +
         params.item_bias(i);
}

Real softplus_f(const DiscriminatorParams& params, Index c, Index i) {
  return softplus(score(params, c, i));
}

WeightedNegatives importance_weights(const DiscriminatorParams& params, Index c,
                                     std::vector<Index> items,
                                     Vector log_proposal, Real temperature) {
  if (items.empty()) {
    throw ContractError("importance_weights: empty item sample");
  }
  if (!(temperature > 0.0)) {
    throw ContractError("importance_weights: temperature must be positive");
  }
  if (static_cast<Index>(items.size()) != log_proposal.size()) {
    throw ContractError("importance_weights: items/log_proposal length mismatch");
  }

  Vector z(log_proposal.size());
  for (Index j = 0; j < z.size(); ++j) {
    z(j) = softplus_f(params, c, items[static_cast<std::size_t>(j)]) / temperature -
           log_proposal(j);
  }

  WeightedNegatives out;
  out.context = c;
  out.items = std::move(items);
  out.log_proposal = std::move(log_proposal);
  out.weights = softmax(z);
  out.temperature = temperature;
  return out;
}

Real loss_contribution(const DiscriminatorParams& params, Index c,
                       std::span<const Index> positives,
                       const WeightedNegatives& negatives) {
  if (positives.empty()) {
    throw ContractError("loss_contribution: context " + std::to_string(c) +
                        " has no positives");
  }
  Real pos_term = 0.0;
  for (Index i : positives) {
    pos_term += softplus(-score(params, c, i));  // -log sigmoid(g)
  }
  pos_term /= static_cast<Real>(positives.size());

  Real neg_term = 0.0;
  for (Index j = 0; j < negatives.weights.size(); ++j) {
    neg_term += negatives.weights(j) *
                softplus(score(params, c,
                               negatives.items[static_cast<std::size_t>(j)]));
  }
  return pos_term + neg_term;
}

namespace {

Vector& map_row(std::unordered_map<Index, Vector>& m, Index key, Index dim) {
  auto [it, fresh] = m.try_emplace(key);
  if (fresh) it->second = Vector::Zero(dim);
  return it->second;
}

void adam_row(Eigen::Ref<RowMatrix> param, Eigen::Ref<RowMatrix> m,
              Eigen::Ref<RowMatrix> v, Index row, const Vector& grad,
              const OptimizerState& opt, Real bc1, Real bc2) {
  for (Index k = 0; k < grad.size(); ++k) {
    const Real g = grad(k);
    m(row, k) = opt.beta1 * m(row, k) + (1.0 - opt.beta1) * g;
    v(row, k) = opt.beta2 * v(row, k) + (1.0 - opt.beta2) * g * g;
    const Real mhat = m(row, k) / bc1;
    const Real vhat = v(row, k) / bc2;
    param(row, k) -= opt.learning_rate * mhat / (std::sqrt(vhat) + opt.epsilon);
  }
}

}  // namespace

OptimizerState OptimizerState::init(Index num_contexts, Index num_items,
                                    Index dim) {
  OptimizerState s;
  s.m_context = RowMatrix::Zero(num_contexts, dim);
  s.v_context = RowMatrix::Zero(num_contexts, dim);
  s.m_item = RowMatrix::Zero(num_items, dim);
  s.v_item = RowMatrix::Zero(num_items, dim);
  s.m_bias = Vector::Zero(num_items);
  s.v_bias = Vector::Zero(num_items);
  return s;
}

BatchGradients compute_gradients(const DiscriminatorParams& params,
                                 std::span<const BatchEntry> batch,
                                 Real l2_coeff,
                                 bool stop_gradient_through_weights) {
  const Index dim = params.dim();
  BatchGradients acc;

  for (const BatchEntry& entry : batch) {
    const Index c = entry.context;
    if (entry.positives.empty()) {
      throw ContractError("gradient: context " + std::to_string(c) +
                          " has no positives");
    }
    Vector& ctx_grad = map_row(acc.context, c, dim);
    const Real inv_pos = 1.0 / static_cast<Real>(entry.positives.size());

    for (Index i : entry.positives) {
      const Real g = score(params, c, i);
      acc.loss += inv_pos * softplus(-g);
      // d/dg of (1/|pos|) softplus(-g) = -(1 - sigmoid(g)) / |pos|
      const Real coef = -inv_pos * (1.0 - sigmoid(g));
      ctx_grad += coef * params.item_emb.row(i).transpose();
      map_row(acc.item, i, dim) += coef * params.context_emb.row(c).transpose();
      acc.bias[i] += coef;
    }

    const WeightedNegatives& negs = entry.negatives;
    const Index n = static_cast<Index>(negs.items.size());
    Vector g_neg(n), s_neg(n);
    Real neg_loss = 0.0;
    for (Index j = 0; j < n; ++j) {
      g_neg(j) = score(params, c, negs.items[static_cast<std::size_t>(j)]);
      s_neg(j) = softplus(g_neg(j));
      neg_loss += negs.weights(j) * s_neg(j);
    }
    acc.loss += neg_loss;

    for (Index j = 0; j < n; ++j) {
      const Index i = negs.items[static_cast<std::size_t>(j)];
      // d/dg of w_j softplus(g_j) with w constant; when the weights are
      // differentiated, the softmax coupling adds w_j (s_j - sum_k w_k s_k)/T.
      Real coef = negs.weights(j) * sigmoid(g_neg(j));
      if (!stop_gradient_through_weights) {
        coef += negs.weights(j) * sigmoid(g_neg(j)) * (s_neg(j) - neg_loss) /
                negs.temperature;
      }
      ctx_grad += coef * params.item_emb.row(i).transpose();
      map_row(acc.item, i, dim) += coef * params.context_emb.row(c).transpose();
      acc.bias[i] += coef;
    }
  }

  // L2 on touched parameters: penalty l2 * ||theta||^2, applied once per row.
  if (l2_coeff != 0.0) {
    for (auto& [c, g] : acc.context) {
      g += 2.0 * l2_coeff * params.context_emb.row(c).transpose();
    }
    for (auto& [i, g] : acc.item) {
      g += 2.0 * l2_coeff * params.item_emb.row(i).transpose();
    }
    for (auto& [i, g] : acc.bias) g += 2.0 * l2_coeff * params.item_bias(i);
  }

  for (const auto& [c, g] : acc.context) {
    if (!g.allFinite()) {
      throw NumericError("non-finite gradient for context " + std::to_string(c));
    }
  }
  for (const auto& [i, g] : acc.item) {
    if (!g.allFinite()) {
      throw NumericError("non-finite gradient for item " + std::to_string(i));
    }
  }
  return acc;
}

Real grad_and_step(DiscriminatorParams& params, OptimizerState& opt,
                   std::span<const BatchEntry> batch,
                   bool stop_gradient_through_weights) {
  const BatchGradients acc =
      compute_gradients(params, batch, opt.l2_coeff, stop_gradient_through_weights);

  ++opt.step;
  const Real bc1 = 1.0 - std::pow(opt.beta1, static_cast<Real>(opt.step));
  const Real bc2 = 1.0 - std::pow(opt.beta2, static_cast<Real>(opt.step));
  for (const auto& [c, g] : acc.context) {
    adam_row(params.context_emb, opt.m_context, opt.v_context, c, g, opt, bc1, bc2);
  }
  for (const auto& [i, g] : acc.item) {
    adam_row(params.item_emb, opt.m_item, opt.v_item, i, g, opt, bc1, bc2);
  }
  for (const auto& [i, g] : acc.bias) {
    opt.m_bias(i) = opt.beta1 * opt.m_bias(i) + (1.0 - opt.beta1) * g;
    opt.v_bias(i) = opt.beta2 * opt.v_bias(i) + (1.0 - opt.beta2) * g * g;
    params.item_bias(i) -= opt.learning_rate * (opt.m_bias(i) / bc1) /
                           (std::sqrt(opt.v_bias(i) / bc2) + opt.epsilon);
  }
  return acc.loss;
}

}  // namespace sdgar
