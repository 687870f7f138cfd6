#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>

#include "sdgar/types.hpp"

namespace sdgar {

inline Real sigmoid(Real g) {
  if (g >= 0) {
    return 1.0 / (1.0 + std::exp(-g));
  }
  const Real e = std::exp(g);
  return e / (1.0 + e);
}

// log(1 + exp(g)) without overflow/underflow.
inline Real softplus(Real g) {
  if (g > 30.0) return g;
  if (g < -30.0) return std::exp(g);
  return std::log1p(std::exp(g));
}

template <class Derived>
Real log_sum_exp(const Eigen::DenseBase<Derived>& z) {
  if (z.size() == 0) return -std::numeric_limits<Real>::infinity();
  const Real m = z.maxCoeff();
  if (!std::isfinite(m)) return m;
  Real acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    acc += std::exp(z.derived()(i) - m);
  }
  return m + std::log(acc);
}

// Max-shifted softmax; returns a dense vector on the simplex.
template <class Derived>
Vector softmax(const Eigen::DenseBase<Derived>& z) {
  Vector out(z.size());
  if (z.size() == 0) return out;
  const Real m = z.maxCoeff();
  Real total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    out(i) = std::exp(z.derived()(i) - m);
    total += out(i);
  }
  out /= total;
  return out;
}

// -sum p log p with 0 log 0 = 0.
template <class Derived>
Real entropy(const Eigen::DenseBase<Derived>& p) {
  Real h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Real v = p.derived()(i);
    if (v > 0) h -= v * std::log(v);
  }
  return h;
}

inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t seed = 0xcbf29ce484222325ULL) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sdgar
