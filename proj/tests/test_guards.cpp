#include <doctest.h>

#include "poaas/guards.hpp"
#include "test_util.hpp"

using namespace poaas;
using namespace poaas::guards;
using poaas_test::lexicons;

TEST_SUITE("guards") {

TEST_CASE("sanitize strips meta-commentary, quotes, and artifacts") {
  const auto& lex = *lexicons();
  CHECK(sanitize("Here is the rewrite: What causes tides?", lex) == "What causes tides?");
  CHECK(sanitize("\"What causes tides?\"", lex) == "What causes tides?");
  CHECK(sanitize("What causes tides?", lex) == "What causes tides?");
  CHECK(sanitize("Sure, here's: the fixed text", lex) == "the fixed text");
  CHECK(sanitize("- What causes tides?", lex) == "What causes tides?");
  CHECK(sanitize("```\nWhat causes tides?\n```", lex) == "What causes tides?");
  // stacked artifacts unwind to a fixpoint
  CHECK(sanitize("Here is the rewrite: \"What causes tides?\"", lex) == "What causes tides?");
  // interior quotes are content, not wrapping
  CHECK(sanitize("say \"hi\" and \"bye\"", lex) == "say \"hi\" and \"bye\"");
  CHECK(sanitize("Here is the rewrite:", lex) == "");
}

TEST_CASE("sanitize is idempotent") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(31);
  const char* samples[] = {
      "Here is the rewrite: \"- done\"",
      "\"\"",
      "'quoted once'",
      "```text\nbody line\n```",
      "1. a numbered line",
      "Sure, here is - the result",
  };
  for (const char* s : samples) {
    const std::string once = sanitize(s, lex);
    CHECK(sanitize(once, lex) == once);
  }
  for (int i = 0; i < 200; ++i) {
    const std::string s = gen.random_string(50, "ab \"'`-:.1H");
    const std::string once = sanitize(s, lex);
    CHECK(sanitize(once, lex) == once);
  }
}

TEST_CASE("cleaner guard accepts corrections, rejects new content") {
  const auto& lex = *lexicons();
  auto fixed = cleaner_guard("wht is teh capital", "what is the capital", lex);
  CHECK(fixed.passed);

  auto injected =
      cleaner_guard("what is the capital", "what is the capital of France in 1800", lex);
  CHECK_FALSE(injected.passed);
  CHECK(injected.reason == GuardReason::kNewContent);

  auto dropped = cleaner_guard("Summarize the report from 2016 briefly",
                               "Summarize the report briefly", lex);
  CHECK_FALSE(dropped.passed);
  CHECK(dropped.reason == GuardReason::kDroppedConstraint);
}

TEST_CASE("cleaner guard identity always passes") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(17);
  for (int i = 0; i < 200; ++i) {
    const std::string s = gen.random_sentence(10);
    auto v = cleaner_guard(s, s, lex);
    CHECK(v.passed);
  }
}

TEST_CASE("paraphrase guard verdicts") {
  const auto& lex = *lexicons();
  auto lost = paraphrase_guard("Why do cats purr?", "Explain the purring of cats.", lex);
  CHECK_FALSE(lost.passed);
  CHECK(lost.reason == GuardReason::kLostQuestionMark);

  auto faithful = paraphrase_guard("Why do cats purr?", "Why do cats make a purring sound?", lex);
  CHECK(faithful.passed);

  auto new_url = paraphrase_guard("Why do cats purr?",
                                  "Why do cats purr? See https://cats.example.com?", lex);
  CHECK_FALSE(new_url.passed);
  CHECK(new_url.reason == GuardReason::kNewContent);

  auto dropped = paraphrase_guard("Cite \"Deep Learning\" from 2016?",
                                  "Cite the famous book from 2016?", lex);
  CHECK_FALSE(dropped.passed);
  CHECK(dropped.reason == GuardReason::kDroppedConstraint);
}

TEST_CASE("fact guard filters leakage and enforces budgets") {
  const auto& lex = *lexicons();
  merger::TokenBudget budget;

  auto kept = fact_guard("", {"Paris is the capital of France."}, budget, lex);
  CHECK_FALSE(kept.none);
  CHECK(kept.bullets.size() == 1);

  auto leak = fact_guard("", {"Step 1: add the numbers", "The answer is 42"}, budget, lex);
  CHECK(leak.none);

  auto four = fact_guard("",
                         {"France is in Europe.", "Paris is its capital city.",
                          "The Seine flows through Paris.", "The Louvre is a museum."},
                         budget, lex);
  CHECK(four.bullets.size() == 3);  // order-preserving truncation
  CHECK(four.bullets[0] == "France is in Europe.");

  // trailing bare option letter or bare number leaks the solution
  auto letter = fact_guard("", {"The correct choice is B"}, budget, lex);
  CHECK(letter.none);
  auto number = fact_guard("", {"The total comes to 42"}, budget, lex);
  CHECK(number.none);
  auto stepwise = fact_guard("", {"First mix the flour and then bake it."}, budget, lex);
  CHECK(stepwise.none);

  // token budget truncation at the bullet boundary
  std::string fifty;
  for (int i = 0; i < 50; ++i) fifty += i ? " word" : "word";
  auto trunc = fact_guard("", {fifty + " end.", fifty + " end.", fifty + " end."}, budget, lex);
  CHECK(trunc.bullets.size() == 2);  // 51+51 fits, the third would exceed 120
}

TEST_CASE("fact guard output never exceeds its caps") {
  const auto& lex = *lexicons();
  merger::TokenBudget budget;
  poaas_test::TextGen gen(8);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> facts;
    const std::size_t n = 1 + gen.below(6);
    for (std::size_t k = 0; k < n; ++k) {
      facts.push_back(gen.random_sentence(40) + " done.");
    }
    auto filtered = fact_guard("", facts, budget, lex);
    CHECK(filtered.bullets.size() <= budget.fact_bullet_cap);
    std::size_t total = 0;
    for (const auto& b : filtered.bullets) {
      total += merger::count_tokens(b, budget.counter);
    }
    CHECK(total <= budget.fact_token_cap);
  }
}

TEST_CASE("parse fact bullets") {
  const auto& lex = *lexicons();
  auto bullets = parse_fact_bullets("- Paris is the capital of France.\n- France is in Europe.",
                                    lex);
  CHECK(bullets == std::vector<std::string>{"Paris is the capital of France.",
                                            "France is in Europe."});
  CHECK(parse_fact_bullets("NONE", lex).empty());
  CHECK(parse_fact_bullets("none\n", lex).empty());
  auto numbered = parse_fact_bullets("1. First fact here.\n2. Second fact here.", lex);
  CHECK(numbered.size() == 2);
}

TEST_CASE("few-shot detection and byte-exact reconstruction") {
  FewShotSegmentation seg = detect_fewshot("Q: a A: 1\n\nQ: b A: 2\n\nQ: c A:");
  CHECK(seg.detected);
  CHECK(seg.prefix == "Q: a A: 1\n\nQ: b A: 2\n\n");
  CHECK(seg.final_query == "Q: c A:");
  CHECK(seg.prefix + seg.final_query == "Q: a A: 1\n\nQ: b A: 2\n\nQ: c A:");

  auto plain = detect_fewshot("What causes tides?");
  CHECK_FALSE(plain.detected);
  CHECK(plain.final_query == "What causes tides?");

  auto single = detect_fewshot("Q: a A: 1\n\nQ: b A:");
  CHECK_FALSE(single.detected);  // one answered exemplar is not few-shot

  auto wordy = detect_fewshot(
      "Question: first one\nAnswer: yes\n\nQuestion: second one\nAnswer: no\n\nQuestion: "
      "final one\nAnswer:");
  CHECK(wordy.detected);
  CHECK(wordy.final_query == "Question: final one\nAnswer:");
  CHECK(wordy.prefix + wordy.final_query ==
        "Question: first one\nAnswer: yes\n\nQuestion: second one\nAnswer: no\n\nQuestion: "
        "final one\nAnswer:");

  // fully answered exemplars with no trailing query leave nothing editable
  auto complete = detect_fewshot("Q: a A: 1\n\nQ: b A: 2");
  CHECK_FALSE(complete.detected);
}

TEST_CASE("guard verdicts are deterministic") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(5150);
  for (int i = 0; i < 100; ++i) {
    const std::string a = gen.random_sentence(10);
    const std::string b = gen.random_sentence(10);
    auto v1 = paraphrase_guard(a, b, lex);
    auto v2 = paraphrase_guard(a, b, lex);
    CHECK(v1.passed == v2.passed);
    CHECK(v1.reason == v2.reason);
  }
}

}  // TEST_SUITE
