#pragma once

#include <span>
#include <vector>

#include "sdgar/types.hpp"

namespace sdgar {

struct BenchRow {
  Index num_items = 0;
  Real alias_ns_per_draw = 0.0;  // two-step decomposable draw
  Real naive_ns_per_draw = 0.0;  // full softmax + CDF walk per draw
};

// Times, for each item-universe size, (a) the two-step alias draw through a
// K-state generator and (b) a naive sampler that recomputes the softmax over
// all item scores for every draw. alias_draws bounds the alias timing loop;
// the naive loop sizes itself to keep runtime sane at large M.
std::vector<BenchRow> bench_sampler(std::span<const Index> sizes,
                                    Index alias_draws, Index num_states,
                                    std::uint64_t seed);

}  // namespace sdgar
