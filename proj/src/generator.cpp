#include "sdgar/generator.hpp"

#include <cmath>
#include <string>

#include "sdgar/errors.hpp"
#include "sdgar/math.hpp"

namespace sdgar {

GeneratorParams GeneratorParams::init(Index num_contexts, Index num_items,
                                      Index num_states, Rng& rng) {
  GeneratorParams gen;
  gen.X.resize(num_contexts, num_states);
  gen.Y.resize(num_items, num_states);
  for (Index c = 0; c < num_contexts; ++c) {
    for (Index k = 0; k < num_states; ++k) gen.X(c, k) = draw_unit(rng);
  }
  for (Index i = 0; i < num_items; ++i) {
    for (Index k = 0; k < num_states; ++k) gen.Y(i, k) = draw_unit(rng);
  }
  for (Index c = 0; c < num_contexts; ++c) gen.X.row(c) /= gen.X.row(c).sum();
  for (Index k = 0; k < num_states; ++k) gen.Y.col(k) /= gen.Y.col(k).sum();
  return gen;
}

Real q_item_prob(const GeneratorParams& gen, Index c, Index i) {
  return gen.X.row(c).dot(gen.Y.row(i));
}

Real q_context_prob(const GeneratorParams& gen, const GeneratorTables& tables,
                    Index i, Index c) {
  const Real row_sum = tables.y_row_sum(i);
  if (!(row_sum > 0.0)) {
    throw InvalidDistributionError("item " + std::to_string(i) +
                                   " has zero generator mass");
  }
  Real p = 0.0;
  for (Index k = 0; k < gen.num_states(); ++k) {
    p += (gen.Y(i, k) / row_sum) * (gen.X(c, k) / tables.x_col_sum(k));
  }
  return p;
}

Real q_context_prob(const GeneratorParams& gen, Index i, Index c) {
  const Real row_sum = gen.Y.row(i).sum();
  if (!(row_sum > 0.0)) {
    throw InvalidDistributionError("item " + std::to_string(i) +
                                   " has zero generator mass");
  }
  Real p = 0.0;
  for (Index k = 0; k < gen.num_states(); ++k) {
    p += (gen.Y(i, k) / row_sum) * (gen.X(c, k) / gen.X.col(k).sum());
  }
  return p;
}

std::vector<Index> sample_items(const GeneratorParams& gen,
                                const GeneratorTables& tables, Index c, Index n,
                                Rng& rng) {
  (void)gen;
  std::vector<Index> out(static_cast<std::size_t>(n));
  const AliasTable& states = tables.state_given_context[static_cast<std::size_t>(c)];
  for (auto& item : out) {
    const Index k = draw(states, rng);
    item = draw(tables.item_given_state[static_cast<std::size_t>(k)], rng);
  }
  return out;
}

std::vector<Index> sample_contexts(const GeneratorParams& gen,
                                   const GeneratorTables& tables, Index i,
                                   Index n, Rng& rng) {
  (void)gen;
  std::vector<Index> out(static_cast<std::size_t>(n));
  const AliasTable& states = tables.state_given_item[static_cast<std::size_t>(i)];
  for (auto& ctx : out) {
    const Index k = draw(states, rng);
    ctx = draw(tables.context_given_state[static_cast<std::size_t>(k)], rng);
  }
  return out;
}

namespace {

// Self-normalized weights over a sample drawn from Q(.|c): softmax of
// f_c(j)/T - log Q(j|c).
Vector sample_weights(const DiscriminatorParams& disc, const GeneratorParams& gen,
                      Index c, std::span<const Index> sample, Real temperature) {
  if (sample.empty()) {
    throw ContractError("generator estimate: empty sample for context " +
                        std::to_string(c));
  }
  Vector z(static_cast<Index>(sample.size()));
  for (Index j = 0; j < z.size(); ++j) {
    const Index item = sample[static_cast<std::size_t>(j)];
    z(j) = softplus_f(disc, c, item) / temperature -
           std::log(q_item_prob(gen, c, item));
  }
  return softmax(z);
}

}  // namespace

Real estimate_mu(const DiscriminatorParams& disc, const GeneratorParams& gen,
                 Index c, std::span<const Index> sample, Real temperature) {
  const Vector w = sample_weights(disc, gen, c, sample, temperature);
  Real mu = 0.0;
  for (Index j = 0; j < w.size(); ++j) {
    mu += w(j) * softplus_f(disc, c, sample[static_cast<std::size_t>(j)]);
  }
  return mu;
}

Vector estimate_b(const DiscriminatorParams& disc, const GeneratorParams& gen,
                  Index c, std::span<const Index> sample, Real mu_c,
                  Real temperature) {
  const Vector w = sample_weights(disc, gen, c, sample, temperature);
  Vector b = Vector::Zero(gen.num_states());
  for (Index j = 0; j < w.size(); ++j) {
    const Index item = sample[static_cast<std::size_t>(j)];
    const Real scale = w(j) * std::abs(softplus_f(disc, c, item) - mu_c);
    b += scale * gen.Y.row(item).transpose();
  }
  return b;
}

Real estimate_log_z(const DiscriminatorParams& disc, const GeneratorParams& gen,
                    Index c, std::span<const Index> sample, Real temperature) {
  if (sample.empty()) {
    throw ContractError("estimate_log_z: empty sample for context " +
                        std::to_string(c));
  }
  Vector z(static_cast<Index>(sample.size()));
  for (Index j = 0; j < z.size(); ++j) {
    const Index item = sample[static_cast<std::size_t>(j)];
    z(j) = softplus_f(disc, c, item) / temperature -
           std::log(q_item_prob(gen, c, item));
  }
  return log_sum_exp(z) - std::log(static_cast<Real>(sample.size()));
}

Vector estimate_d(const DiscriminatorParams& disc, const GeneratorParams& gen,
                  const GeneratorTables& tables, Index i,
                  std::span<const Index> contexts, const Vector& mu,
                  const Vector& log_z, Real temperature,
                  DEstimateStats* stats) {
  if (contexts.empty()) {
    throw ContractError("estimate_d: empty context sample for item " +
                        std::to_string(i));
  }
  Vector d = Vector::Zero(gen.num_states());
  for (const Index c : contexts) {
    const Real q = q_context_prob(gen, tables, i, c);
    if (!(q > 0.0)) {
      if (stats != nullptr) ++stats->skipped;
      continue;
    }
    const Real log_w =
        softplus_f(disc, c, i) / temperature - std::log(q) - log_z(c);
    const Real w = std::exp(log_w);
    d += (w * std::abs(softplus_f(disc, c, i) - mu(c))) * gen.X.row(c).transpose();
  }
  return d / static_cast<Real>(contexts.size());
}

namespace {

Vector floored_softmax(const Eigen::Ref<const Vector>& scores, Real lambda,
                       const char* what) {
  if (!(lambda > 0.0)) {
    throw ContractError(std::string(what) + ": lambda must be positive");
  }
  Vector p = softmax(scores / lambda);
  p = p.cwiseMax(1e-12);
  p /= p.sum();
  return p;
}

}  // namespace

Vector update_x(const Eigen::Ref<const Vector>& b_c, Real lambda_x) {
  return floored_softmax(b_c, lambda_x, "update_x");
}

Vector update_y(const Eigen::Ref<const Vector>& d_k, Real lambda_y) {
  return floored_softmax(d_k, lambda_y, "update_y");
}

GeneratorTables rebuild_tables(const GeneratorParams& gen) {
  const Index n = gen.num_contexts();
  const Index m = gen.num_items();
  const Index k = gen.num_states();

  GeneratorTables tables;
  tables.x_col_sum = gen.X.colwise().sum().transpose();
  tables.y_row_sum = gen.Y.rowwise().sum();

  auto build_or_name = [](auto&& weights, const std::string& name) {
    try {
      return build_alias(weights);
    } catch (const InvalidDistributionError& e) {
      throw InvalidDistributionError(name + ": " + e.what());
    }
  };

  tables.state_given_context.reserve(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; ++c) {
    tables.state_given_context.push_back(
        build_or_name(gen.X.row(c), "P(k|c) for context " + std::to_string(c)));
  }
  tables.item_given_state.reserve(static_cast<std::size_t>(k));
  tables.context_given_state.reserve(static_cast<std::size_t>(k));
  for (Index s = 0; s < k; ++s) {
    tables.item_given_state.push_back(
        build_or_name(gen.Y.col(s), "P(i|k) for state " + std::to_string(s)));
    tables.context_given_state.push_back(
        build_or_name(gen.X.col(s), "P(c|k) for state " + std::to_string(s)));
  }
  tables.state_given_item.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    tables.state_given_item.push_back(
        build_or_name(gen.Y.row(i), "P(k|i) for item " + std::to_string(i)));
  }
  return tables;
}

}  // namespace sdgar
