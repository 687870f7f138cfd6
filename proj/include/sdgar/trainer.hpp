#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdgar/dataset.hpp"
#include "sdgar/discriminator.hpp"
#include "sdgar/generator.hpp"
#include "sdgar/types.hpp"

namespace sdgar {

enum class SamplerMode { sd_gar, uniform, self_adversarial, dns };

SamplerMode parse_sampler_mode(const std::string& name);
std::string to_string(SamplerMode mode);

struct TrainConfig {
  Real temperature = 1.0;  // T
  Real lambda_x = 1.0;
  Real lambda_y = 1.0;
  Index generator_period = 5;  // refresh the generator every this many epochs
  Index neg_per_context = 5;   // negatives per positive interaction
  Index est_samples = 64;      // sample-set size for generator estimation
  Index num_states = 32;       // K
  Index dim = 32;              // d
  Index epochs = 0;
  Index batch_size = 512;  // positive interactions per batch
  SamplerMode sampler_mode = SamplerMode::sd_gar;
  std::uint64_t seed = 0;
  Index eval_k = 50;
  Index num_threads = 1;

  Real learning_rate = 1e-3;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real epsilon = 1e-8;
  Real l2_coeff = 0.03;

  // Throws ConfigError naming the offending field.
  void validate() const;
  std::uint64_t hash() const;
};

struct EpochRecord {
  Index epoch = 0;
  Real mean_loss = 0.0;    // mean per-context loss over the epoch
  Real valid_ndcg = 0.0;   // NaN when there is no validation data
  Real disc_seconds = 0.0;
  Real gen_seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
};

struct TrainResult {
  DiscriminatorParams disc;
  GeneratorParams gen;
  TrainLog log;
  Index best_epoch = 0;  // 0 when no validation-based selection happened
};

// Mode-dispatched negative sampling for one context. sd_gar draws through the
// generator tables with exact log-proposals; the other modes draw uniformly
// over all items. Positives are never filtered out of the draw.
WeightedNegatives make_negatives(SamplerMode mode,
                                 const DiscriminatorParams& disc,
                                 const GeneratorParams& gen,
                                 const GeneratorTables& tables, Index c,
                                 Index n, Real temperature, Rng& rng);

// Runs the alternating loop: per epoch, mini-batch discriminator updates on
// weighted negatives; every generator_period epochs, the closed-form
// generator refresh. Returns the best-validation-epoch parameters when
// validation data exists, otherwise the final ones. Deterministic for a fixed
// config regardless of num_threads.
TrainResult train(const TrainConfig& config, const DatasetSplit& split,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace sdgar
