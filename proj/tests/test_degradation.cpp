#include <doctest.h>

#include <set>

#include "poaas/degradation.hpp"
#include "poaas/error.hpp"
#include "poaas/text.hpp"
#include "test_util.hpp"

using namespace poaas;
using namespace poaas::degradation;
using poaas_test::lexicons;

TEST_SUITE("degradation") {

TEST_CASE("round-half-up token counts") {
  CHECK(affected_token_count(20, 0.10) == 2);
  CHECK(affected_token_count(5, 0.05) == 0);   // round_half_up(0.25) = 0
  CHECK(affected_token_count(10, 0.15) == 2);  // round_half_up(1.5) = 2
  CHECK(affected_token_count(20, 0.15) == 3);
  CHECK(affected_token_count(3, 0.15) == 0);   // round_half_up(0.45) = 0
}

TEST_CASE("delete mode removes exactly k tokens") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(9);
  for (double rate : {0.05, 0.10, 0.15}) {
    for (int i = 0; i < 100; ++i) {
      const std::string line = gen.random_sentence(30);
      const std::size_t n = text::whitespace_token_count(line);
      CorruptionSpec spec{CorruptionMode::kDelete, rate, 1234 + static_cast<std::uint64_t>(i)};
      const std::string out = corrupt(line, spec, lex);
      CHECK(text::whitespace_token_count(out) == n - affected_token_count(n, rate));
    }
  }
}

TEST_CASE("mixup mode replaces exactly k tokens in place") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(10);
  for (int i = 0; i < 100; ++i) {
    const std::string line = gen.random_sentence(30);
    const auto before = text::split_ws(line);
    CorruptionSpec spec{CorruptionMode::kMixup, 0.15, 99 + static_cast<std::uint64_t>(i)};
    const auto after = text::split_ws(corrupt(line, spec, lex));
    REQUIRE(after.size() == before.size());
    std::size_t diffs = 0;
    for (std::size_t k = 0; k < before.size(); ++k) {
      if (before[k] != after[k]) {
        ++diffs;
        // replacements come from the shipped vocabulary
        bool in_vocab = false;
        for (const auto& w : lex.mixup_vocab()) {
          if (w == after[k]) {
            in_vocab = true;
            break;
          }
        }
        CHECK(in_vocab);
      }
    }
    CHECK(diffs == affected_token_count(before.size(), 0.15));
  }
}

TEST_CASE("same spec twice gives identical output") {
  const auto& lex = *lexicons();
  CorruptionSpec spec{CorruptionMode::kDelete, 0.10, 7};
  const std::string line = "What causes ocean tides to rise and fall each day?";
  CHECK(corrupt(line, spec, lex) == corrupt(line, spec, lex));
  spec.mode = CorruptionMode::kMixup;
  CHECK(corrupt(line, spec, lex) == corrupt(line, spec, lex));
}

TEST_CASE("frozen golden outputs pin the generator") {
  // SplitMix64 is fully specified, so these bytes must never change on any
  // platform or build.
  SplitMix64 rng(42);
  CHECK(rng.next() == 13679457532755275413ULL);
  CHECK(rng.next() == 2949826092126892291ULL);

  const auto& lex = *lexicons();
  const std::string line = "the quick brown fox jumps over the lazy dog near the river bank";
  CHECK(corrupt(line, {CorruptionMode::kDelete, 0.15, 7, "default"}, lex) ==
        "the brown fox jumps over the lazy dog near the bank");
  CHECK(corrupt(line, {CorruptionMode::kMixup, 0.15, 7, "default"}, lex) ==
        "the data brown fox jumps over the lazy dog near the rain bank");
}

TEST_CASE("k of zero only normalizes spacing") {
  const auto& lex = *lexicons();
  CorruptionSpec spec{CorruptionMode::kDelete, 0.05, 3};
  CHECK(corrupt("one   two\tthree four  five", spec, lex) == "one two three four five");
}

TEST_CASE("errors: empty text and invalid rate") {
  const auto& lex = *lexicons();
  CorruptionSpec spec{CorruptionMode::kDelete, 0.10, 1};
  CHECK_THROWS_AS((void)corrupt("   ", spec, lex), EmptyInputError);
  spec.rate = 1.5;
  CHECK_THROWS_AS((void)corrupt("a b c", spec, lex), ConfigError);
  spec.rate = 0.0;
  CHECK_THROWS_AS((void)corrupt("a b c", spec, lex), ConfigError);
}

TEST_CASE("corpus corruption is line-order independent") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(11);
  std::vector<std::string> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(gen.random_sentence(20));

  CorruptionSpec spec{CorruptionMode::kDelete, 0.10, 555};
  const auto out = corrupt_corpus(corpus, spec, lex);
  REQUIRE(out.size() == corpus.size());

  // corrupting a single line with its derived seed reproduces the same text
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CorruptionSpec line_spec = spec;
    line_spec.seed = line_seed(spec.seed, i);
    CHECK(corrupt(corpus[i], line_spec, lex) == out[i]);
  }
}

TEST_CASE("empty corpus lines pass through with a warning") {
  const auto& lex = *lexicons();
  CorruptionSpec spec{CorruptionMode::kDelete, 0.10, 1};
  std::size_t warnings = 0;
  auto out = corrupt_corpus({"a b c d e f g h i j", "", "k l m n o p q r s t"}, spec, lex,
                            &warnings);
  CHECK(warnings == 1);
  CHECK(out[1] == "");
}

}  // TEST_SUITE
