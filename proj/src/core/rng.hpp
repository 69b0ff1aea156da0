#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace corrgen {

/// Independent streams drawn from one user seed.
enum class Stream : std::uint32_t {
  Graph = 1,
  SeedMatrix = 2,
  Method = 3,
  TieBreak = 4,
};

/// Seedable generator with a fully specified output sequence.
///
/// The engine is std::mt19937_64, seeded through std::seed_seq with the words
/// {seed & 0xffffffff, seed >> 32, stream, attempt}; both are defined bit for
/// bit by the C++ standard. The standard library distributions are not, so the
/// conversions are done here:
///   - uniform():  (next >> 11) * 2^-53, in [0, 1)
///   - below(n):   rejection sampling on the top bits, unbiased
///   - normal():   Marsaglia polar method, caching the second variate
class Rng {
 public:
  explicit Rng(std::uint64_t seed, Stream stream = Stream::Graph,
               std::uint32_t attempt = 0);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n);
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace corrgen
