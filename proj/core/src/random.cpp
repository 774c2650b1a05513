#include "sgdephase/random.hpp"

#include <vector>

namespace sgdephase {

std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (key.size() + 1));
  const auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto k : key) push(k);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace sgdephase
