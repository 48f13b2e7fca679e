#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spam {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Error with a machine-readable kind tag. Kinds in use:
// "shape", "config", "io", "schema", "parse", "domain", "numeric", "unsupported".
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, const char* kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

// splitmix64: cheap, well-mixed 64-bit finalizer used to derive independent
// seed streams (per-trial, per-epoch) from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x9e3779b97f4a7c15ull));
}

// Deterministic RNG helpers. std::uniform_* distributions are
// implementation-defined, so draws are built from raw mt19937_64 output to
// keep every artifact byte-reproducible across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0xd1b54a32d192ed03ull)) {
    // warm up: splitmix is already well mixed, a single extra step is enough
    next();
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // log-uniform over [lo, hi], lo > 0
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Fisher-Yates permutation of 0..n-1
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
      std::swap(p[i], p[j]);
    }
    return p;
  }

private:
  std::uint64_t state_;
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

// Small integer power by left-to-right multiplication. Every code path that
// raises an inner product to the order uses this, so decompositions stay
// bit-identical across the row-wise and batched paths.
inline double ipow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace spam
