#include <doctest.h>

#include <cmath>

#include "poaas/drift.hpp"
#include "poaas/error.hpp"
#include "poaas/text.hpp"
#include "reference_oracles.hpp"
#include "test_util.hpp"

using namespace poaas;
using namespace poaas::drift;
using poaas_test::lexicons;

TEST_SUITE("drift") {

TEST_CASE("seq_ratio basics") {
  CHECK(seq_ratio("abc", "abc") == doctest::Approx(1.0));
  CHECK(seq_ratio("abcd", "zzzz") == doctest::Approx(0.0));
  CHECK(seq_ratio("abcd", "abce") == doctest::Approx(0.75));
  CHECK(seq_ratio("", "") == doctest::Approx(1.0));
  CHECK(seq_ratio("ABC  def", "abc def") == doctest::Approx(1.0));  // normalization
}

TEST_CASE("char trigram jaccard") {
  CHECK(char_ngram_jaccard("abc", "abc") == doctest::Approx(1.0));
  CHECK(char_ngram_jaccard("abcd", "bcde") == doctest::Approx(1.0 / 3.0));
  CHECK(char_ngram_jaccard("ab", "ab") == doctest::Approx(1.0));  // both shingle sets empty
  CHECK(char_ngram_jaccard("ab", "xyzw") == doctest::Approx(0.0));
}

TEST_CASE("word bigram jaccard") {
  CHECK(word_ngram_jaccard("a b c", "a b c") == doctest::Approx(1.0));
  CHECK(word_ngram_jaccard("a b c", "b c d") == doctest::Approx(1.0 / 3.0));
  CHECK(word_ngram_jaccard("a b c", "x y z") == doctest::Approx(0.0));
}

TEST_CASE("weighted token overlap") {
  const auto& lex = *lexicons();
  CHECK(weighted_token_overlap("cat dog", "dog cat", lex) == doctest::Approx(1.0));
  // intersection {the}: 0.2 over union {the, cat, dog}: 0.2 + 1 + 1
  CHECK(weighted_token_overlap("the cat", "the dog", lex) == doctest::Approx(0.2 / 2.2));
  CHECK(weighted_token_overlap("cat", "dog", lex) == doctest::Approx(0.0));
}

TEST_CASE("similarity ensemble weights") {
  const auto& lex = *lexicons();
  auto self = similarity("What causes tides?", "What causes tides?", lex);
  CHECK(self.sim == doctest::Approx(1.0));
  CHECK(self.d == doctest::Approx(0.0));

  auto r = similarity("the cat sat", "a dog ran off", lex);
  CHECK(r.sim == doctest::Approx(0.5 * r.s_seq + 0.3 * r.s_jac + 0.2 * r.s_tok));
  CHECK(r.d == doctest::Approx(1.0 - r.sim));
}

TEST_CASE("key item extraction") {
  auto none = extract_key_items("Compare GPT models");
  CHECK(none.total() == 0);

  auto items =
      extract_key_items("Visit https://X.com and cite \"Deep Learning\" from 2016");
  CHECK(items.urls_emails == std::vector<std::string>{"https://x.com"});
  CHECK(items.quoted == std::vector<std::string>{"Deep Learning"});
  CHECK(items.numbers == std::vector<std::string>{"2016"});
  CHECK(items.entities.empty());
  CHECK(items.total() == 3);

  CHECK(extract_key_items("").total() == 0);

  auto entity = extract_key_items("Tell me about Marie Curie and her work");
  CHECK(entity.entities == std::vector<std::string>{"Marie Curie"});

  auto email = extract_key_items("Mail Bob@Example.com today");
  CHECK(email.urls_emails == std::vector<std::string>{"bob@example.com"});

  auto decimals = extract_key_items("pi is 3.14, e is 2.718.");
  CHECK(decimals.numbers == std::vector<std::string>{"3.14", "2.718"});
}

TEST_CASE("preservation ratio") {
  CHECK(preservation_ratio("no key items here", "anything at all") == doctest::Approx(1.0));
  CHECK(preservation_ratio("From 2016 see https://a.io", "in 2016 at https://a.io") ==
        doctest::Approx(1.0));
  CHECK(preservation_ratio("From 2016 see https://a.io", "see https://a.io") ==
        doctest::Approx(0.5));
  // removing a number never raises preservation
  const std::string x = "Between 1900 and 1950 the rate doubled";
  CHECK(preservation_ratio(x, "Between 1900 and 1950 it doubled") >
        preservation_ratio(x, "Between 1900 it doubled"));
}

TEST_CASE("drift penalty equation") {
  const auto& lex = *lexicons();
  DriftPolicy policy;

  // P >= 0.8 leaves drift untouched
  auto clean = compute_drift("What causes tides?", "What causes the tides?", policy, lex);
  CHECK(clean.d_final == doctest::Approx(clean.d));

  CHECK_THROWS_AS((void)compute_drift("", "x", policy, lex), EmptyInputError);
}

TEST_CASE("drift penalty branches, synthetic") {
  // the formula itself, checked against hand values from the equation
  const auto apply = [](double d, double p) {
    return p >= 0.8 ? d : std::min(1.0, d + 0.2 * (1.0 - p));
  };
  CHECK(apply(0.10, 0.5) == doctest::Approx(0.20));
  CHECK(apply(0.10, 0.9) == doctest::Approx(0.10));
  CHECK(apply(0.95, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("drift of identity is zero") {
  const auto& lex = *lexicons();
  DriftPolicy policy;
  poaas_test::TextGen gen(42);
  for (int i = 0; i < 300; ++i) {
    std::string s = gen.random_sentence(12);
    auto r = compute_drift(s, s, policy, lex);
    CHECK(r.d_final == doctest::Approx(0.0));
    CHECK(r.rho == doctest::Approx(1.0));
  }
}

TEST_CASE("oracle equivalence on random pairs") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(0x5EEDBEEF);
  const std::string alphabet = "abcdefgh  ABZ.?0123";
  for (int i = 0; i < 500; ++i) {
    const std::string a = gen.random_string(40, alphabet);
    const std::string b = gen.random_string(40, alphabet);
    CHECK(char_ngram_jaccard(a, b, 3) ==
          doctest::Approx(oracle::jaccard(oracle::char_shingles(a, 3),
                                          oracle::char_shingles(b, 3))).epsilon(1e-12));
    CHECK(word_ngram_jaccard(a, b, 2) ==
          doctest::Approx(oracle::jaccard(oracle::word_shingles(a, 2),
                                          oracle::word_shingles(b, 2))).epsilon(1e-12));
    CHECK(std::abs(seq_ratio(a, b) - oracle::ratcliff_obershelp(a, b)) < 1e-12);
    // symmetry of the set-based components
    CHECK(char_ngram_jaccard(a, b, 3) == char_ngram_jaccard(b, a, 3));
    CHECK(word_ngram_jaccard(a, b, 2) == word_ngram_jaccard(b, a, 2));
    CHECK(weighted_token_overlap(a, b, lex) == weighted_token_overlap(b, a, lex));
  }
}

TEST_CASE("within_drift per-agent caps") {
  const auto& lex = *lexicons();
  DriftPolicy policy;
  heuristics::QualityProfile good;  // clar = 1.0, typo = 0

  const std::string x = "Explain how the tides work along the coast of France today please";

  // identity edit is always inside every cap
  auto same = within_drift(x, x, agents::AgentKind::kParaphraser, good, policy, lex);
  CHECK(same.accepted);

  // a completely unrelated rewrite blows the global cap
  auto far = within_drift(x, "zzz qqq completely different words entirely unlike before",
                          agents::AgentKind::kCleaner, good, policy, lex);
  CHECK_FALSE(far.accepted);
  CHECK(far.reason == DriftReason::kGlobalCap);

  // length-ratio rejection, Fact-Adder included
  std::string huge = x;
  for (int i = 0; i < 6; ++i) huge += " " + x;
  auto too_long = within_drift(x, huge, agents::AgentKind::kFactAdder, good, policy, lex);
  CHECK_FALSE(too_long.accepted);
  CHECK(too_long.reason == DriftReason::kLengthRatio);

  // Fact-Adder bullets bypass the drift caps
  auto facts = within_drift(x, "- France borders the Atlantic Ocean.",
                            agents::AgentKind::kFactAdder, good, policy, lex);
  CHECK(facts.accepted);
}

TEST_CASE("within_drift paraphraser relaxation") {
  const auto& lex = *lexicons();
  DriftPolicy policy;

  // a pair whose d_final lands between the strict and the relaxed cap
  const std::string x =
      "please sort the list of employee names by their length and print the "
      "result to the console for me";
  const std::string y =
      "please sort the list of employee names by their size and print the "
      "result to the console for me";
  const double d = compute_drift(x, y, policy, lex).d_final;
  REQUIRE(d > policy.delta_para);
  REQUIRE(d <= policy.delta_para_relaxed);

  heuristics::QualityProfile clear_profile;
  clear_profile.clar = 0.9;
  auto strict = within_drift(x, y, agents::AgentKind::kParaphraser, clear_profile, policy, lex);
  CHECK_FALSE(strict.accepted);
  CHECK(strict.reason == DriftReason::kDriftExceeded);

  heuristics::QualityProfile murky_profile;
  murky_profile.clar = 0.5;  // low clarity relaxes the cap to 0.13
  auto relaxed = within_drift(x, y, agents::AgentKind::kParaphraser, murky_profile, policy, lex);
  CHECK(relaxed.accepted);
}

TEST_CASE("within_drift cleaner cap relaxes with typo level") {
  DriftPolicy policy;
  CHECK(cleaner_cap(policy, 0.0) == doctest::Approx(0.15));
  CHECK(cleaner_cap(policy, 0.3) == doctest::Approx(0.30));
  CHECK(cleaner_cap(policy, 0.9) == doctest::Approx(0.40));  // bounded
}

TEST_CASE("within_drift never accepts rho beyond the cap") {
  const auto& lex = *lexicons();
  DriftPolicy policy;
  heuristics::QualityProfile profile;
  poaas_test::TextGen gen(1234);
  for (int i = 0; i < 200; ++i) {
    const std::string x = gen.random_sentence(8);
    const std::string y = gen.random_sentence(24);
    for (auto kind : agents::kAllAgentKinds) {
      auto v = within_drift(x, y, kind, profile, policy, lex);
      if (v.accepted) {
        CHECK(v.report.rho <= policy.rho_max);
      }
    }
  }
}

}  // TEST_SUITE
