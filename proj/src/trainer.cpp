#include "sdgar/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "sdgar/errors.hpp"
#include "sdgar/evaluator.hpp"
#include "sdgar/math.hpp"
#include "sdgar/parallel.hpp"

namespace sdgar {

namespace {

// Stream tags for deriving independent rng seeds per unit of work.
enum : std::uint64_t {
  kInitStream = 0x01,
  kShuffleStream = 0x02,
  kNegStream = 0x03,
  kMuStream = 0x04,
  kBStream = 0x05,
  kZStream = 0x06,
  kDStream = 0x07,
};

Rng stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t epoch,
               std::uint64_t unit) {
  return make_rng(mix_seed(mix_seed(seed, stream), mix_seed(epoch, unit)));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

SamplerMode parse_sampler_mode(const std::string& name) {
  if (name == "sd_gar") return SamplerMode::sd_gar;
  if (name == "uniform") return SamplerMode::uniform;
  if (name == "self_adversarial") return SamplerMode::self_adversarial;
  if (name == "dns") return SamplerMode::dns;
  throw ConfigError("unknown sampler mode '" + name +
                    "' (expected sd_gar|uniform|self_adversarial|dns)");
}

std::string to_string(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::sd_gar: return "sd_gar";
    case SamplerMode::uniform: return "uniform";
    case SamplerMode::self_adversarial: return "self_adversarial";
    case SamplerMode::dns: return "dns";
  }
  return "?";
}

void TrainConfig::validate() const {
  if (!(temperature > 0.0)) throw ConfigError("T must be positive");
  if (!(lambda_x > 0.0)) throw ConfigError("lambda_x must be positive");
  if (!(lambda_y > 0.0)) throw ConfigError("lambda_y must be positive");
  if (generator_period < 1) throw ConfigError("l_g must be >= 1");
  if (neg_per_context < 1) throw ConfigError("neg_per_context must be >= 1");
  if (est_samples < 1) throw ConfigError("est_samples must be >= 1");
  if (num_states < 1) throw ConfigError("K must be >= 1");
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (eval_k < 1) throw ConfigError("eval_k must be >= 1");
  if (num_threads < 1) throw ConfigError("threads must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must be in [0,1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must be in [0,1)");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (l2_coeff < 0.0) throw ConfigError("l2_coeff must be >= 0");
}

std::uint64_t TrainConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_real = [&h](Real v) { h = fnv1a(&v, sizeof(v), h); };
  auto mix_int = [&h](std::int64_t v) { h = fnv1a(&v, sizeof(v), h); };
  mix_real(temperature);
  mix_real(lambda_x);
  mix_real(lambda_y);
  mix_int(generator_period);
  mix_int(neg_per_context);
  mix_int(est_samples);
  mix_int(num_states);
  mix_int(dim);
  mix_int(epochs);
  mix_int(batch_size);
  mix_int(static_cast<std::int64_t>(sampler_mode));
  mix_int(static_cast<std::int64_t>(seed));
  mix_real(learning_rate);
  mix_real(beta1);
  mix_real(beta2);
  mix_real(epsilon);
  mix_real(l2_coeff);
  return h;
}

WeightedNegatives make_negatives(SamplerMode mode,
                                 const DiscriminatorParams& disc,
                                 const GeneratorParams& gen,
                                 const GeneratorTables& tables, Index c,
                                 Index n, Real temperature, Rng& rng) {
  if (n < 1) throw ContractError("make_negatives: n must be >= 1");
  const Index m = disc.num_items();

  if (mode == SamplerMode::sd_gar) {
    std::vector<Index> items = sample_items(gen, tables, c, n, rng);
    Vector log_prop(n);
    for (Index j = 0; j < n; ++j) {
      log_prop(j) = std::log(
          q_item_prob(gen, c, items[static_cast<std::size_t>(j)]));
    }
    return importance_weights(disc, c, std::move(items), std::move(log_prop),
                              temperature);
  }

  // The remaining modes draw i.i.d. uniformly over all items.
  std::vector<Index> items(static_cast<std::size_t>(n));
  for (auto& item : items) item = draw_index(rng, m);
  Vector log_prop = Vector::Constant(n, -std::log(static_cast<Real>(m)));

  switch (mode) {
    case SamplerMode::uniform: {
      // T -> infinity limit: flat weights.
      WeightedNegatives out;
      out.context = c;
      out.items = std::move(items);
      out.log_proposal = std::move(log_prop);
      out.weights = Vector::Constant(n, 1.0 / static_cast<Real>(n));
      out.temperature = temperature;
      return out;
    }
    case SamplerMode::self_adversarial:
      // Uniform proposal cancels inside the softmax: weights = softmax(f/T).
      return importance_weights(disc, c, std::move(items), std::move(log_prop),
                                temperature);
    case SamplerMode::dns: {
      // T -> 0 limit: all weight on the highest-scored draw.
      Index best = 0;
      Real best_g = score(disc, c, items[0]);
      for (Index j = 1; j < n; ++j) {
        const Real g = score(disc, c, items[static_cast<std::size_t>(j)]);
        if (g > best_g) {
          best_g = g;
          best = j;
        }
      }
      WeightedNegatives out;
      out.context = c;
      out.items = std::move(items);
      out.log_proposal = std::move(log_prop);
      out.weights = Vector::Zero(n);
      out.weights(best) = 1.0;
      out.temperature = temperature;
      return out;
    }
    default:
      break;
  }
  throw ContractError("make_negatives: unreachable mode");
}

namespace {

// One closed-form generator refresh (the l_g-periodic block of the training
// loop). Mutates gen and tables in place; returns estimation diagnostics.
DEstimateStats generator_round(const TrainConfig& config,
                               const DiscriminatorParams& disc,
                               GeneratorParams& gen, GeneratorTables& tables,
                               Index epoch) {
  const Index n = gen.num_contexts();
  const Index m = gen.num_items();
  const Index k = gen.num_states();
  const Real t = config.temperature;
  const Index s = config.est_samples;

  // Phase 1: per-context estimates off the current proposal, then the
  // closed-form x update. Each context draws three fresh sample sets.
  Vector mu(n), log_z(n);
  RowMatrix new_x(n, k);
  parallel_for(n, config.num_threads, [&](Index c) {
    Rng mu_rng = stream_rng(config.seed, kMuStream, static_cast<std::uint64_t>(epoch),
                            static_cast<std::uint64_t>(c));
    Rng b_rng = stream_rng(config.seed, kBStream, static_cast<std::uint64_t>(epoch),
                           static_cast<std::uint64_t>(c));
    Rng z_rng = stream_rng(config.seed, kZStream, static_cast<std::uint64_t>(epoch),
                           static_cast<std::uint64_t>(c));
    const auto mu_sample = sample_items(gen, tables, c, s, mu_rng);
    mu(c) = estimate_mu(disc, gen, c, mu_sample, t);
    const auto b_sample = sample_items(gen, tables, c, s, b_rng);
    const Vector b = estimate_b(disc, gen, c, b_sample, mu(c), t);
    const auto z_sample = sample_items(gen, tables, c, s, z_rng);
    log_z(c) = estimate_log_z(disc, gen, c, z_sample, t);
    new_x.row(c) = update_x(b, config.lambda_x).transpose();
  });
  gen.X = std::move(new_x);
  tables = rebuild_tables(gen);

  // Phase 2: per-item context samples off the updated reverse proposal, then
  // the closed-form y update per state.
  RowMatrix d(k, m);
  std::vector<DEstimateStats> item_stats(static_cast<std::size_t>(m));
  parallel_for(m, config.num_threads, [&](Index i) {
    Rng d_rng = stream_rng(config.seed, kDStream, static_cast<std::uint64_t>(epoch),
                           static_cast<std::uint64_t>(i));
    const auto ctx_sample = sample_contexts(gen, tables, i, s, d_rng);
    d.col(i) = estimate_d(disc, gen, tables, i, ctx_sample, mu, log_z, t,
                          &item_stats[static_cast<std::size_t>(i)]);
  });
  for (Index state = 0; state < k; ++state) {
    gen.Y.col(state) = update_y(d.row(state).transpose(), config.lambda_y);
  }
  tables = rebuild_tables(gen);

  DEstimateStats total;
  for (const auto& st : item_stats) total.skipped += st.skipped;
  return total;
}

}  // namespace

TrainResult train(const TrainConfig& config, const DatasetSplit& split,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  config.validate();
  const InteractionDataset& data = split.train;
  if (data.num_contexts == 0 || data.num_items == 0) {
    throw ConfigError("training data is empty");
  }

  Rng init_rng = stream_rng(config.seed, kInitStream, 0, 0);
  TrainResult result;
  result.disc = DiscriminatorParams::init(data.num_contexts, data.num_items,
                                          config.dim, init_rng);
  result.gen = GeneratorParams::init(data.num_contexts, data.num_items,
                                     config.num_states, init_rng);
  GeneratorTables tables = rebuild_tables(result.gen);
  OptimizerState opt =
      OptimizerState::init(data.num_contexts, data.num_items, config.dim);
  opt.learning_rate = config.learning_rate;
  opt.beta1 = config.beta1;
  opt.beta2 = config.beta2;
  opt.epsilon = config.epsilon;
  opt.l2_coeff = config.l2_coeff;

  // Contexts with training positives; others cannot contribute a loss term.
  std::vector<Index> active;
  active.reserve(static_cast<std::size_t>(data.num_contexts));
  for (Index c = 0; c < data.num_contexts; ++c) {
    if (!data.positives[static_cast<std::size_t>(c)].empty()) active.push_back(c);
  }
  if (active.empty()) throw ConfigError("training data is empty");

  const bool has_validation = split.validation.num_interactions() > 0;
  DiscriminatorParams best_disc;
  GeneratorParams best_gen;
  Real best_ndcg = -1.0;

  for (Index epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto disc_start = std::chrono::steady_clock::now();

    std::vector<Index> order = active;
    Rng shuffle_rng = stream_rng(config.seed, kShuffleStream,
                                 static_cast<std::uint64_t>(epoch), 0);
    fisher_yates_shuffle(order, shuffle_rng);

    Real loss_sum = 0.0;
    std::size_t cursor = 0;
    while (cursor < order.size()) {
      // Group contexts until the batch holds ~batch_size positive
      // interactions; weights stay normalized within each context.
      std::vector<BatchEntry> batch;
      Index batch_pos = 0;
      while (cursor < order.size() && batch_pos < config.batch_size) {
        const Index c = order[cursor++];
        const auto& pos = data.positives[static_cast<std::size_t>(c)];
        batch_pos += static_cast<Index>(pos.size());

        Rng neg_rng = stream_rng(config.seed, kNegStream,
                                 static_cast<std::uint64_t>(epoch),
                                 static_cast<std::uint64_t>(c));
        const Index n_neg =
            config.neg_per_context * static_cast<Index>(pos.size());
        BatchEntry entry;
        entry.context = c;
        entry.positives = std::span<const Index>(pos);
        entry.negatives =
            make_negatives(config.sampler_mode, result.disc, result.gen, tables,
                           c, n_neg, config.temperature, neg_rng);
        batch.push_back(std::move(entry));
      }
      try {
        loss_sum += grad_and_step(result.disc, opt, batch);
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
      }
    }
    const Real mean_loss = loss_sum / static_cast<Real>(active.size());
    if (!std::isfinite(mean_loss)) {
      throw NumericError("epoch " + std::to_string(epoch) +
                         ": non-finite training loss");
    }
    const double disc_seconds = seconds_since(disc_start);

    double gen_seconds = 0.0;
    if (epoch % config.generator_period == 0) {
      const auto gen_start = std::chrono::steady_clock::now();
      try {
        generator_round(config, result.disc, result.gen, tables, epoch);
      } catch (const InvalidDistributionError& e) {
        throw InvalidDistributionError("epoch " + std::to_string(epoch) + ": " +
                                       e.what());
      }
      gen_seconds = seconds_since(gen_start);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss = mean_loss;
    record.disc_seconds = disc_seconds;
    record.gen_seconds = gen_seconds;
    if (has_validation) {
      record.valid_ndcg = evaluate_against(result.disc, split.train,
                                           split.validation, config.eval_k,
                                           /*mask_train=*/true,
                                           config.num_threads)
                              .mean_ndcg;
      if (record.valid_ndcg > best_ndcg) {
        best_ndcg = record.valid_ndcg;
        best_disc = result.disc;
        best_gen = result.gen;
        result.best_epoch = epoch;
      }
    } else {
      record.valid_ndcg = std::numeric_limits<Real>::quiet_NaN();
    }
    result.log.epochs.push_back(record);
    if (on_epoch) on_epoch(record);
  }

  if (has_validation && result.best_epoch > 0) {
    result.disc = std::move(best_disc);
    result.gen = std::move(best_gen);
  }
  return result;
}

}  // namespace sdgar
