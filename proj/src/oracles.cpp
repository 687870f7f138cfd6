#include "sdgar/oracles.hpp"

#include <cmath>
#include <limits>

#include "sdgar/errors.hpp"
#include "sdgar/math.hpp"

namespace sdgar {

namespace {

Vector all_f(const DiscriminatorParams& disc, Index c) {
  Vector f(disc.num_items());
  for (Index i = 0; i < f.size(); ++i) f(i) = softplus_f(disc, c, i);
  return f;
}

}  // namespace

Index exact_hard_optimum(const DiscriminatorParams& disc, Index c) {
  Index best = 0;
  Real best_g = score(disc, c, 0);
  for (Index i = 1; i < disc.num_items(); ++i) {
    const Real g = score(disc, c, i);
    if (g > best_g) {
      best_g = g;
      best = i;
    }
  }
  return best;
}

Vector exact_soft_optimum(const DiscriminatorParams& disc, Index c, Real t) {
  if (!(t > 0.0)) throw ContractError("exact_soft_optimum: t must be positive");
  return softmax(all_f(disc, c) / t);
}

Real exact_objective(const DiscriminatorParams& disc,
                     const std::vector<Vector>& gen_dist,
                     const InteractionDataset& dataset) {
  Real total = 0.0;
  for (Index c = 0; c < dataset.num_contexts; ++c) {
    const auto& pos = dataset.positives[static_cast<std::size_t>(c)];
    if (pos.empty()) {
      throw ContractError("exact_objective: context " + std::to_string(c) +
                          " has no positives");
    }
    Real pos_term = 0.0;
    for (Index i : pos) pos_term += softplus(-score(disc, c, i));
    total += pos_term / static_cast<Real>(pos.size());

    const Vector& q = gen_dist[static_cast<std::size_t>(c)];
    for (Index i = 0; i < q.size(); ++i) {
      if (q(i) > 0.0) total += q(i) * softplus(score(disc, c, i));
    }
  }
  return total;
}

Real exact_variance_term(const DiscriminatorParams& disc, Index c,
                         const Eigen::Ref<const Vector>& proposal, Real t) {
  const Vector f = all_f(disc, c);
  const Vector p_star = softmax(f / t);
  const Real mu = p_star.dot(f);
  Real term = 0.0;
  for (Index i = 0; i < f.size(); ++i) {
    const Real numer = p_star(i) * p_star(i) * (f(i) - mu) * (f(i) - mu);
    if (numer == 0.0) continue;
    if (!(proposal(i) > 0.0)) {
      return std::numeric_limits<Real>::infinity();
    }
    term += numer / proposal(i);
  }
  return term;
}

Real exact_variance(const DiscriminatorParams& disc, const GeneratorParams& gen,
                    const InteractionDataset& dataset, Real t,
                    std::span<const Index> sample_sizes) {
  const Index n = dataset.num_contexts;
  if (sample_sizes.size() != 1 &&
      static_cast<Index>(sample_sizes.size()) != n) {
    throw ContractError("exact_variance: sample_sizes must be one value or N");
  }
  Real total = 0.0;
  Vector q(dataset.num_items);
  for (Index c = 0; c < n; ++c) {
    for (Index i = 0; i < dataset.num_items; ++i) q(i) = q_item_prob(gen, c, i);
    const Index size =
        sample_sizes[sample_sizes.size() == 1 ? 0 : static_cast<std::size_t>(c)];
    const Real term = exact_variance_term(disc, c, q, t);
    if (std::isinf(term)) return term;
    total += term / static_cast<Real>(size);
  }
  return total;
}

Real variance_lower_bound_term(const DiscriminatorParams& disc, Index c,
                               Real t) {
  const Vector f = all_f(disc, c);
  const Vector p_star = softmax(f / t);
  const Real mu = p_star.dot(f);
  const Real mean_abs = p_star.dot((f.array() - mu).abs().matrix());
  return mean_abs * mean_abs;
}

Vector optimal_proposal(const DiscriminatorParams& disc, Index c, Real t) {
  const Vector f = all_f(disc, c);
  const Vector p_star = softmax(f / t);
  const Real mu = p_star.dot(f);
  Vector q = p_star.cwiseProduct((f.array() - mu).abs().matrix());
  const Real total = q.sum();
  if (!(total > 0.0)) {
    throw InvalidDistributionError(
        "optimal_proposal: |f - mu| vanishes everywhere for context " +
        std::to_string(c));
  }
  return q / total;
}

GeneratorEstimates exact_mu_b_d(const DiscriminatorParams& disc,
                                const GeneratorParams& gen,
                                const InteractionDataset& dataset, Real t) {
  const Index n = dataset.num_contexts;
  const Index m = dataset.num_items;
  const Index k = gen.num_states();

  GeneratorEstimates est;
  est.mu.resize(n);
  est.b = RowMatrix::Zero(n, k);
  est.log_z.resize(n);
  est.d = RowMatrix::Zero(k, m);

  for (Index c = 0; c < n; ++c) {
    const Vector f = all_f(disc, c);
    est.log_z(c) = log_sum_exp(f / t);
    const Vector p_star = softmax(f / t);
    const Real mu = p_star.dot(f);
    est.mu(c) = mu;
    for (Index i = 0; i < m; ++i) {
      const Real scale = p_star(i) * std::abs(f(i) - mu);
      est.b.row(c) += scale * gen.Y.row(i);
      est.d.col(i) += scale * gen.X.row(c).transpose();
    }
  }
  return est;
}

}  // namespace sdgar
