#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poaas/budget.hpp"
#include "poaas/data.hpp"

namespace poaas::guards {

enum class GuardReason {
  kOk,
  kNewContent,
  kDroppedConstraint,
  kLostQuestionMark,
  kAnswerLeakage,
  kReasoningMarker,
  kMetaCommentaryOnly,
  kOverLength,
};

std::string_view to_string(GuardReason reason);

struct GuardVerdict {
  bool passed = false;
  GuardReason reason = GuardReason::kOk;
  std::optional<std::string> repaired_text;  // present only when a repair was applied

  static GuardVerdict ok() { return {true, GuardReason::kOk, std::nullopt}; }
  static GuardVerdict fail(GuardReason r) { return {false, r, std::nullopt}; }
};

// Strips meta-commentary openers, markdown fences, enclosing quotes and
// leading list markers from a specialist candidate. Idempotent; may return an
// empty string when nothing but meta-commentary was present (the caller maps
// that to META_COMMENTARY_ONLY).
std::string sanitize(std::string_view candidate, const data::Lexicons& lex);

// Cleaner edits must not add content: every new content token has to be a
// lexicon correction of something in the original or within edit distance 2
// of an original token, and every key item must survive.
GuardVerdict cleaner_guard(std::string_view original, std::string_view edited,
                           const data::Lexicons& lex);

// Paraphrases must preserve key items, introduce no new numbers, URLs or
// entities, and keep a trailing question mark.
GuardVerdict paraphrase_guard(std::string_view original, std::string_view edited,
                              const data::Lexicons& lex);

struct FactFilterResult {
  std::vector<std::string> bullets;  // surviving bullets, original order
  bool none = false;                 // nothing survived
  GuardReason reason = GuardReason::kOk;  // dominant rejection reason when none
};

// Answer-leakage and budget filter for Fact-Adder bullets: drops bullets with
// answer phrases, stepwise markers, or bare trailing option letters/numbers,
// then enforces the bullet and token caps.
FactFilterResult fact_guard(std::string_view original, const std::vector<std::string>& facts,
                            const merger::TokenBudget& budget, const data::Lexicons& lex);

// Splits a raw Fact-Adder completion into bullet texts ("- " / "* " / "1."
// markers or plain lines); meta lines are dropped.
std::vector<std::string> parse_fact_bullets(std::string_view raw, const data::Lexicons& lex);

struct FewShotSegmentation {
  std::string prefix;       // exemplar block including its trailing separator
  std::string final_query;  // the only editable span
  bool detected = false;
};

// Detects two or more answered "Q: ... A: ..." (or "Question:/Answer:")
// exemplar blocks. When detected, prefix + final_query reconstructs the
// prompt byte for byte.
FewShotSegmentation detect_fewshot(std::string_view prompt);

}  // namespace poaas::guards
