#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "poaas/agent_kind.hpp"
#include "poaas/data.hpp"
#include "poaas/heuristics.hpp"

namespace poaas::drift {

// Ratcliff-Obershelp gestalt ratio (difflib.SequenceMatcher semantics with
// junk heuristics disabled), computed on lowercased, whitespace-normalized
// Unicode scalars. Two empty strings compare as 1.0.
double seq_ratio(std::string_view a, std::string_view b);

// Jaccard similarity over character n-gram sets of the normalized strings.
// Two empty shingle sets compare as 1.0.
double char_ngram_jaccard(std::string_view a, std::string_view b, std::size_t n = 3);

// Jaccard similarity over word n-gram sets of the normalized strings.
double word_ngram_jaccard(std::string_view a, std::string_view b, std::size_t n = 2);

// Weighted token-set overlap: w(t)=1 for content tokens, 0.2 for stopwords.
double weighted_token_overlap(std::string_view a, std::string_view b,
                              const data::Lexicons& lex);

struct DriftReport {
  double s_seq = 1.0;
  double s_jac = 1.0;  // 0.6 * char-3 Jaccard + 0.4 * word-2 Jaccard
  double s_tok = 1.0;
  double sim = 1.0;        // 0.5*s_seq + 0.3*s_jac + 0.2*s_tok
  double d = 0.0;          // 1 - sim
  double p_content = 1.0;  // key-item preservation ratio
  double d_final = 0.0;    // drift after the preservation penalty
  double rho = 1.0;        // character-length ratio len(x')/len(x)
};

// Fills the similarity components and D; preservation/rho fields keep their
// neutral defaults.
DriftReport similarity(std::string_view a, std::string_view b, const data::Lexicons& lex);

// Key items extracted from the original prompt. Multisets, deterministic
// extraction order.
struct KeyItems {
  std::vector<std::string> numbers;      // normalized numeric literals
  std::vector<std::string> quoted;       // spans between matching double quotes
  std::vector<std::string> urls_emails;  // lowercased
  std::vector<std::string> entities;     // two consecutive Capitalized tokens

  std::size_t total() const {
    return numbers.size() + quoted.size() + urls_emails.size() + entities.size();
  }
};

KeyItems extract_key_items(std::string_view x);

// Fraction of x's key items that survive in x2; 1.0 when x has none.
// Multiset semantics: an item counts up to its multiplicity in x.
double preservation_ratio(std::string_view x, std::string_view x2);

struct DriftPolicy {
  double delta_clean_base = 0.15;   // Cleaner cap on clean prompts
  double delta_para = 0.08;        // Paraphraser cap
  double delta_para_relaxed = 0.13;  // Paraphraser cap when clarity is low
  double delta_max = 0.18;         // global fail-safe cap
  double rho_max = 2.4;            // character-length ratio cap
  double preservation_floor = 0.8;   // no penalty at or above this ratio
  double penalty_weight = 0.2;     // drift penalty per unit of lost content
};

// Full drift report for an edit: similarity ensemble, preservation penalty,
// and length ratio. Throws EmptyInputError when x has no characters.
DriftReport compute_drift(std::string_view x, std::string_view x2, const DriftPolicy& policy,
                          const data::Lexicons& lex);

enum class DriftReason {
  kOk,
  kDriftExceeded,   // per-agent cap
  kGlobalCap,       // delta_max fail-safe
  kLengthRatio,     // rho_max
  kOverLength,      // sanitized output longer than 2x the original
};

std::string_view to_string(DriftReason reason);

struct DriftVerdict {
  bool accepted = false;
  DriftReason reason = DriftReason::kOk;
  DriftReport report;
};

// Effective Cleaner cap: the base cap relaxed linearly with the prompt's typo
// score, bounded at 0.40. The global delta_max check still applies on top.
double cleaner_cap(const DriftPolicy& policy, double typo);

// Gate a candidate edit against the drift and length caps. Fact-Adder
// candidates are additive context: they bypass the drift caps (the fact guard
// and the merge-time budget own their content) but still honor rho_max.
DriftVerdict within_drift(std::string_view x, std::string_view x2, agents::AgentKind agent,
                          const heuristics::QualityProfile& profile, const DriftPolicy& policy,
                          const data::Lexicons& lex);

}  // namespace poaas::drift
