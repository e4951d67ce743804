#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "poaas/data.hpp"

namespace poaas::degradation {

enum class CorruptionMode { kDelete, kMixup };

CorruptionMode corruption_mode_from_string(std::string_view name);
std::string_view to_string(CorruptionMode mode);

struct CorruptionSpec {
  CorruptionMode mode = CorruptionMode::kDelete;
  double rate = 0.10;      // fraction of word tokens affected, in (0,1)
  std::uint64_t seed = 0;  // fully determines outcomes for a given text
  std::string vocab_id = "default";  // mixup replacement vocabulary
};

// SplitMix64: tiny, fully specified, identical across platforms. That is the
// whole point — corrupted corpora must be byte-reproducible anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform draw in [0, n) without modulo bias
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

// round-half-up of rate * token_count
std::size_t affected_token_count(std::size_t token_count, double rate);

// Deterministic per-line seed so corpus lines are independently reproducible
// regardless of processing order.
std::uint64_t line_seed(std::uint64_t seed, std::size_t line_index);

// Deletes or replaces round_half_up(rate*n) tokens chosen by a seeded
// Fisher-Yates partial shuffle; survivors are rejoined with single spaces.
// Throws EmptyInputError when the text has no tokens; ConfigError for an
// out-of-range rate.
std::string corrupt(std::string_view input, const CorruptionSpec& spec,
                    const data::Lexicons& lex);

// Per-line corruption with line_seed(seed, index). Empty lines pass through
// and are tallied in warning_count.
std::vector<std::string> corrupt_corpus(const std::vector<std::string>& lines,
                                        const CorruptionSpec& spec, const data::Lexicons& lex,
                                        std::size_t* warning_count = nullptr);

}  // namespace poaas::degradation
