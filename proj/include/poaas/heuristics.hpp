#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "poaas/data.hpp"

namespace poaas::heuristics {

// Whitespace tokenization plus the normalized view the scores operate on.
struct TokenizedPrompt {
  std::string raw;
  std::vector<std::string> tokens;             // whitespace split, verbatim
  std::vector<std::string> normalized_tokens;  // lowercased, surrounding punctuation stripped
  std::size_t char_count = 0;                  // Unicode scalar values in raw
  bool is_question_start = false;              // first normalized token is a wh-word

  static TokenizedPrompt from_text(std::string_view input);

  bool empty() const { return tokens.empty(); }
};

struct RoutingThresholds {
  double tau_typo = 0.30;
  double tau_comp = 0.70;
  double tau_flu = 0.80;
  double tau_skip = 0.25;
  double tau_clar_fixed = 0.70;  // fixed clarity floor inside q(x)
  double typo_skip_max = 0.20;   // skipping additionally requires typo below this
};

struct QualityProfile {
  double typo = 0.0;  // higher is worse
  double comp = 1.0;
  double flu = 1.0;
  double clar = 1.0;
  double q = 1.0;
};

// All four scores are additive penalty schemes clipped to [0,1]; they are
// pure functions of (prompt, lexicons) and throw EmptyInputError on prompts
// with no tokens.
double typo_score(const TokenizedPrompt& p, const data::Lexicons& lex);
double completeness_score(const TokenizedPrompt& p, const data::Lexicons& lex);
double fluency_score(const TokenizedPrompt& p);
double clarity_score(const TokenizedPrompt& p);

// Four scores plus the overall quality
//   q = 1 - max(typo, [tau_comp - comp]+, [tau_flu - flu]+, [tau_clar_fixed - clar]+)
QualityProfile analyze(const TokenizedPrompt& p, const RoutingThresholds& t,
                       const data::Lexicons& lex);

// Conservative gate: skip refinement only for prompts that are both high
// quality overall and nearly typo free (strict inequalities).
bool should_skip(const QualityProfile& profile, const RoutingThresholds& t);

}  // namespace poaas::heuristics
