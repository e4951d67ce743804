#include "poaas/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "poaas/error.hpp"
#include "poaas/text.hpp"

namespace poaas::degradation {

CorruptionMode corruption_mode_from_string(std::string_view name) {
  if (name == "delete") return CorruptionMode::kDelete;
  if (name == "mixup") return CorruptionMode::kMixup;
  throw ConfigError("unknown corruption mode: " + std::string(name));
}

std::string_view to_string(CorruptionMode mode) {
  return mode == CorruptionMode::kDelete ? "delete" : "mixup";
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  // rejection sampling keeps the draw unbiased for every n
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % n;
}

std::size_t affected_token_count(std::size_t token_count, double rate) {
  return static_cast<std::size_t>(
      std::floor(rate * static_cast<double>(token_count) + 0.5));
}

std::uint64_t line_seed(std::uint64_t seed, std::size_t line_index) {
  SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(line_index) + 1)));
  return mixer.next();
}

std::string corrupt(std::string_view input, const CorruptionSpec& spec,
                    const data::Lexicons& lex) {
  if (spec.rate <= 0.0 || spec.rate >= 1.0) {
    throw ConfigError("corruption rate must be in (0,1)");
  }
  auto tokens = text::split_ws(input);
  if (tokens.empty()) {
    throw EmptyInputError("corrupt: text has no word tokens");
  }
  const std::size_t n = tokens.size();
  const std::size_t k = std::min(affected_token_count(n, spec.rate), n);

  if (k == 0) {
    return text::join(tokens, " ");
  }

  SplitMix64 rng(spec.seed);

  // Fisher-Yates partial shuffle over token indices; the first k entries are
  // the affected positions.
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(indices[i], indices[j]);
  }
  std::vector<std::size_t> chosen(indices.begin(), indices.begin() + static_cast<long>(k));
  std::sort(chosen.begin(), chosen.end());

  if (spec.mode == CorruptionMode::kDelete) {
    std::vector<std::string> kept;
    kept.reserve(n - k);
    std::size_t next_chosen = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (next_chosen < chosen.size() && chosen[next_chosen] == i) {
        ++next_chosen;
        continue;
      }
      kept.push_back(std::move(tokens[i]));
    }
    return text::join(kept, " ");
  }

  // mixup: replacements drawn in ascending position order
  const auto& vocab = lex.mixup_vocab();
  for (std::size_t pos : chosen) {
    tokens[pos] = vocab[static_cast<std::size_t>(rng.below(vocab.size()))];
  }
  return text::join(tokens, " ");
}

std::vector<std::string> corrupt_corpus(const std::vector<std::string>& lines,
                                        const CorruptionSpec& spec, const data::Lexicons& lex,
                                        std::size_t* warning_count) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  std::size_t warnings = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    CorruptionSpec line_spec = spec;
    line_spec.seed = line_seed(spec.seed, i);
    try {
      out.push_back(corrupt(lines[i], line_spec, lex));
    } catch (const EmptyInputError&) {
      out.push_back(lines[i]);
      ++warnings;
    }
  }
  if (warning_count) *warning_count = warnings;
  return out;
}

}  // namespace poaas::degradation
