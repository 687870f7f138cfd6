#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdgar/types.hpp"

namespace sdgar {

// Implicit-feedback interactions: per-context sorted lists of distinct
// positive item indices, densely indexed from 0. The original identifiers are
// kept so splits round-trip through files.
struct InteractionDataset {
  Index num_contexts = 0;
  Index num_items = 0;
  std::vector<std::vector<Index>> positives;
  std::vector<std::string> context_ids;
  std::vector<std::string> item_ids;

  Index num_interactions() const {
    Index n = 0;
    for (const auto& p : positives) n += static_cast<Index>(p.size());
    return n;
  }
};

struct DatasetSplit {
  InteractionDataset train;
  InteractionDataset validation;
  InteractionDataset test;
  std::uint64_t seed = 0;
  Real train_frac = 0.0;
  Real valid_frac = 0.0;
};

// Reads UTF-8 text, one interaction per line, fields separated by tab or
// comma (auto-detected from the first line), optional third rating field.
// With a threshold, records whose rating is <= threshold are dropped.
// Throws ParseError naming the line number on malformed records and
// ConfigError if a threshold is supplied for a ratingless file.
InteractionDataset load_interactions(const std::string& path,
                                     std::optional<Real> rating_threshold = {});

// Drops contexts with fewer than min_count positives and re-densifies context
// indices. Single pass; items are never pruned.
InteractionDataset filter_min_interactions(const InteractionDataset& ds,
                                           Index min_count);

// Per context: ceil(train_frac * |positives|) into the train pool, remainder
// into test, then floor(valid_frac * pool) moved from the pool to validation.
// Pure function of (ds, fractions, seed). All three parts share the context
// and item index spaces of ds; per-context lists may be empty in a part.
DatasetSplit split(const InteractionDataset& ds, Real train_frac,
                   Real valid_frac, std::uint64_t seed);

// Writes train.tsv / valid.tsv / test.tsv (original identifiers, tab
// separated) plus split.meta into dir.
void write_split(const DatasetSplit& sp, const std::string& dir);

// Reads the three files back under one shared id space (train, then valid,
// then test order of first appearance).
DatasetSplit load_split(const std::string& dir);

}  // namespace sdgar
