#include "sdgar/bench.hpp"

#include <chrono>
#include <cmath>

#include "sdgar/generator.hpp"

namespace sdgar {

namespace {

using Clock = std::chrono::steady_clock;

Real ns_elapsed(Clock::time_point start) {
  return std::chrono::duration<Real, std::nano>(Clock::now() - start).count();
}

// IRGAN-style sampling with on-the-fly probability computation: softmax over
// all M scores, then an inverse-CDF walk. O(M) per draw.
Index naive_softmax_draw(const Vector& scores, Rng& rng) {
  const Index m = scores.size();
  const Real shift = scores.maxCoeff();
  Real total = 0.0;
  for (Index i = 0; i < m; ++i) total += std::exp(scores(i) - shift);
  const Real u = draw_unit(rng) * total;
  Real cum = 0.0;
  for (Index i = 0; i < m; ++i) {
    cum += std::exp(scores(i) - shift);
    if (u < cum) return i;
  }
  return m - 1;
}

}  // namespace

std::vector<BenchRow> bench_sampler(std::span<const Index> sizes,
                                    Index alias_draws, Index num_states,
                                    std::uint64_t seed) {
  std::vector<BenchRow> rows;
  rows.reserve(sizes.size());

  for (const Index m : sizes) {
    BenchRow row;
    row.num_items = m;

    Rng setup = make_rng(mix_seed(seed, static_cast<std::uint64_t>(m)));
    GeneratorParams gen = GeneratorParams::init(/*num_contexts=*/16, m,
                                                num_states, setup);
    GeneratorTables tables = rebuild_tables(gen);

    Rng rng = make_rng(mix_seed(seed, 0x5eedULL));
    volatile Index sink = 0;
    Index acc = 0;
    for (Index i = 0; i < alias_draws / 10; ++i) {
      acc += sample_items(gen, tables, i % 16, 1, rng)[0];
    }
    const auto alias_start = Clock::now();
    for (Index i = 0; i < alias_draws; ++i) {
      const Index k = draw(tables.state_given_context[static_cast<std::size_t>(i % 16)], rng);
      acc += draw(tables.item_given_state[static_cast<std::size_t>(k)], rng);
    }
    row.alias_ns_per_draw = ns_elapsed(alias_start) / static_cast<Real>(alias_draws);
    sink = sink + acc;

    Vector scores(m);
    for (Index i = 0; i < m; ++i) scores(i) = draw_real(setup, -2.0, 2.0);
    // Size the naive loop so even M = 1e5 finishes in a few seconds.
    const Index naive_draws =
        std::max<Index>(64, std::min<Index>(20000, 20000000 / std::max<Index>(m, 1)));
    acc = 0;
    for (Index i = 0; i < std::max<Index>(4, naive_draws / 10); ++i) {
      acc += naive_softmax_draw(scores, rng);
    }
    const auto naive_start = Clock::now();
    for (Index i = 0; i < naive_draws; ++i) acc += naive_softmax_draw(scores, rng);
    row.naive_ns_per_draw = ns_elapsed(naive_start) / static_cast<Real>(naive_draws);
    sink = sink + acc;

    rows.push_back(row);
  }
  return rows;
}

}  // namespace sdgar
