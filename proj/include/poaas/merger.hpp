#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poaas/agent_kind.hpp"
#include "poaas/budget.hpp"
#include "poaas/drift.hpp"
#include "poaas/guards.hpp"
#include "poaas/heuristics.hpp"

namespace poaas::merger {

// One specialist's proposal after sanitization, guarding, and drift checking.
struct Candidate {
  agents::AgentKind agent = agents::AgentKind::kCleaner;
  std::string sanitized_text;              // rewrite text; rendered bullets for Fact-Adder
  std::vector<std::string> fact_bullets;   // Fact-Adder only
  guards::GuardVerdict guard;
  drift::DriftVerdict drift;
  bool accepted = false;
  std::string reject_reason;  // stable code when not accepted
};

struct MergeDecision {
  std::string output;
  std::vector<agents::AgentKind> applied_agents;  // precedence order
  std::vector<std::pair<agents::AgentKind, std::string>> rejected;
  bool fell_back = false;  // output equals the input byte for byte
  std::size_t added_prompt_tokens = 0;
};

// Renders bullets as "- " lines, truncating at the first bullet that would
// push the total past the token budget, and joins them to the query with one
// blank line.
std::string prepend_facts(std::string_view query, const std::vector<std::string>& bullets,
                          const TokenBudget& budget);

// Drift-controlled composition: Cleaner replaces the query, Paraphraser is
// re-checked against the current working text before replacing it, Fact-Adder
// bullets are prepended, the untouched few-shot prefix is reattached, and the
// global drift/length caps are enforced on the result. Any failure falls back
// to the original prompt unchanged.
MergeDecision merge(std::string_view original, const std::vector<Candidate>& candidates,
                    const guards::FewShotSegmentation& seg, const TokenBudget& budget,
                    const drift::DriftPolicy& policy, const heuristics::QualityProfile& profile,
                    const data::Lexicons& lex);

}  // namespace poaas::merger
