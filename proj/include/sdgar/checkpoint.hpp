#pragma once

#include <cstdint>
#include <string>

#include "sdgar/discriminator.hpp"
#include "sdgar/generator.hpp"

namespace sdgar {

struct Checkpoint {
  DiscriminatorParams disc;
  GeneratorParams gen;
  std::uint64_t config_hash = 0;
};

// Flat binary container: magic, config hash, (N, M, d, K), then row-major
// context_emb, item_emb, item_bias, X, Y as little-endian doubles, followed
// by an FNV-1a checksum of everything after the magic. Round-trips bit
// exactly.
void save_checkpoint(const DiscriminatorParams& disc, const GeneratorParams& gen,
                     const std::string& path, std::uint64_t config_hash = 0);

// Throws ShapeError on a size mismatch (naming expected/actual) and
// ChecksumError on corruption.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace sdgar
