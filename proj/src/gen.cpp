#include "rechart/gen.hpp"

#include <stdexcept>

namespace rechart {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next() { return splitmix64(state_); }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  // rejection sampling keeps the distribution exactly uniform
  std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

Rng Rng::split(std::uint64_t stream) const {
  std::uint64_t s = seed_ ^ (stream * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL);
  splitmix64(s);
  return Rng(s);
}

ExprPtr random_expr(Rng& rng, std::size_t max_size, const std::vector<std::string>& alphabet) {
  if (max_size < 1) throw std::invalid_argument("size budget must be at least 1");
  if (alphabet.empty()) throw std::invalid_argument("alphabet must be nonempty");

  enum { k_zero, k_one, k_act, k_star, k_sum, k_prod };
  std::vector<int> feasible{k_zero, k_one, k_act};
  if (max_size >= 2) feasible.push_back(k_star);
  if (max_size >= 3) {
    feasible.push_back(k_sum);
    feasible.push_back(k_prod);
  }
  int choice = feasible[rng.below(feasible.size())];
  switch (choice) {
    case k_zero:
      return zero();
    case k_one:
      return one();
    case k_act:
      return act(alphabet[rng.below(alphabet.size())]);
    case k_star:
      return star(random_expr(rng, max_size - 1, alphabet));
    case k_sum:
    case k_prod: {
      std::size_t left = 1 + rng.below(max_size - 2);
      ExprPtr l = random_expr(rng, left, alphabet);
      ExprPtr r = random_expr(rng, max_size - 1 - left, alphabet);
      return choice == k_sum ? sum(std::move(l), std::move(r))
                             : prod(std::move(l), std::move(r));
    }
  }
  return zero();
}

}  // namespace rechart
