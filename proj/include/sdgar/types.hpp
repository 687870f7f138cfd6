#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace sdgar {

using Real = double;
using Index = std::int64_t;

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
// Embedding tables are indexed by row almost everywhere, so keep them row-major.
using RowMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// All randomness flows through a caller-owned engine so seeded runs reproduce.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Bounded draw via Lemire multiply-shift. std::uniform_int_distribution is
// implementation-defined, which would break seed reproducibility across
// standard libraries.
inline Index draw_index(Rng& rng, Index n) {
  return static_cast<Index>((static_cast<__uint128_t>(rng()) *
                             static_cast<__uint128_t>(n)) >> 64);
}

// Uniform in [0,1) with 53 random bits.
inline Real draw_unit(Rng& rng) {
  return static_cast<Real>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (lo, hi).
inline Real draw_real(Rng& rng, Real lo, Real hi) {
  return lo + (hi - lo) * draw_unit(rng);
}

template <class T>
void fisher_yates_shuffle(std::vector<T>& v, Rng& rng) {
  for (Index i = static_cast<Index>(v.size()) - 1; i > 0; --i) {
    std::swap(v[static_cast<std::size_t>(i)],
              v[static_cast<std::size_t>(draw_index(rng, i + 1))]);
  }
}

}  // namespace sdgar
