#pragma once

#include <memory>
#include <string>

#include "poaas/data.hpp"
#include "poaas/degradation.hpp"
#include "poaas/heuristics.hpp"

#ifndef POAAS_SOURCE_DATA_DIR
#define POAAS_SOURCE_DATA_DIR "data"
#endif

namespace poaas_test {

inline std::shared_ptr<const poaas::data::Lexicons> lexicons() {
  static const auto lex = std::make_shared<const poaas::data::Lexicons>(
      poaas::data::Lexicons::load(POAAS_SOURCE_DATA_DIR));
  return lex;
}

inline poaas::heuristics::TokenizedPrompt tp(const std::string& s) {
  return poaas::heuristics::TokenizedPrompt::from_text(s);
}

// Deterministic pseudo-random ASCII text for fuzz-style tests.
class TextGen {
 public:
  explicit TextGen(std::uint64_t seed) : rng_(seed) {}

  std::string random_string(std::size_t max_len, const std::string& alphabet) {
    const std::size_t len = static_cast<std::size_t>(rng_.below(max_len + 1));
    std::string out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      out.push_back(alphabet[static_cast<std::size_t>(rng_.below(alphabet.size()))]);
    }
    return out;
  }

  // words drawn from a tiny vocabulary, joined by spaces
  std::string random_sentence(std::size_t max_words) {
    static const char* kWords[] = {"the",   "cat",   "sat",  "on",    "a",     "mat",
                                   "dog",   "runs",  "fast", "2016",  "Paris", "blue",
                                   "river", "explain", "why", "tides", "rise", "today"};
    const std::size_t n = 1 + static_cast<std::size_t>(rng_.below(max_words));
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out.push_back(' ');
      out += kWords[rng_.below(std::size(kWords))];
    }
    return out;
  }

  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }

 private:
  poaas::degradation::SplitMix64 rng_;
};

}  // namespace poaas_test
