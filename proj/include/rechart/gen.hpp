#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rechart/regexp.hpp"

namespace rechart {

// Deterministic splittable RNG (splitmix64); bit-stable across platforms
// so seeded corpora are reproducible everywhere.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next();
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  // Independent stream derived from the original seed; used for
  // per-trial seeds so trials are order-insensitive.
  Rng split(std::uint64_t stream) const;

private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// Random expression of size <= max_size: uniform choice among the
// constructors feasible within the remaining budget, letters uniform
// from the alphabet.
ExprPtr random_expr(Rng& rng, std::size_t max_size, const std::vector<std::string>& alphabet);

}  // namespace rechart
