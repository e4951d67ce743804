#include "poaas/merger.hpp"

#include <algorithm>

#include "poaas/text.hpp"

namespace poaas::merger {

namespace {

const Candidate* find_accepted(const std::vector<Candidate>& candidates,
                               agents::AgentKind kind) {
  for (const auto& c : candidates) {
    if (c.agent == kind && c.accepted) return &c;
  }
  return nullptr;
}

}  // namespace

std::string prepend_facts(std::string_view query, const std::vector<std::string>& bullets,
                          const TokenBudget& budget) {
  std::vector<std::string> lines;
  std::size_t used = 0;
  for (const auto& bullet : bullets) {
    if (lines.size() >= budget.fact_bullet_cap) break;
    const std::size_t cost = count_tokens(bullet, budget.counter);
    if (used + cost > budget.fact_token_cap) break;
    used += cost;
    lines.push_back("- " + bullet);
  }
  if (lines.empty()) return std::string(query);
  return text::join(lines, "\n") + "\n\n" + std::string(query);
}

MergeDecision merge(std::string_view original, const std::vector<Candidate>& candidates,
                    const guards::FewShotSegmentation& seg, const TokenBudget& budget,
                    const drift::DriftPolicy& policy, const heuristics::QualityProfile& profile,
                    const data::Lexicons& lex) {
  MergeDecision decision;
  for (const auto& c : candidates) {
    if (!c.accepted) {
      decision.rejected.emplace_back(c.agent, c.reject_reason.empty()
                                                  ? std::string(to_string(c.guard.reason))
                                                  : c.reject_reason);
    }
  }

  const auto fall_back = [&]() {
    decision.output.assign(original);
    decision.applied_agents.clear();
    decision.fell_back = true;
    decision.added_prompt_tokens = 0;
    return decision;
  };

  const std::string original_query =
      seg.detected ? seg.final_query : std::string(original);

  const Candidate* cleaner = find_accepted(candidates, agents::AgentKind::kCleaner);
  const Candidate* paraphraser = find_accepted(candidates, agents::AgentKind::kParaphraser);
  const Candidate* fact_adder = find_accepted(candidates, agents::AgentKind::kFactAdder);
  if (!cleaner && !paraphraser && !fact_adder) {
    return fall_back();
  }

  std::string working = original_query;
  if (cleaner) {
    working = cleaner->sanitized_text;
    decision.applied_agents.push_back(agents::AgentKind::kCleaner);
  }
  if (paraphraser) {
    // The paraphrase was produced from the original query; before it replaces
    // the (possibly cleaned) working text its drift is validated again.
    const auto recheck =
        drift::within_drift(working, paraphraser->sanitized_text,
                            agents::AgentKind::kParaphraser, profile, policy, lex);
    if (recheck.accepted) {
      working = paraphraser->sanitized_text;
      decision.applied_agents.push_back(agents::AgentKind::kParaphraser);
    } else {
      decision.rejected.emplace_back(agents::AgentKind::kParaphraser,
                                     std::string(to_string(recheck.reason)) + "_ON_MERGE");
    }
  }

  std::string merged_query = working;
  if (fact_adder && !fact_adder->fact_bullets.empty()) {
    merged_query = prepend_facts(working, fact_adder->fact_bullets, budget);
    if (merged_query != working) {
      decision.applied_agents.push_back(agents::AgentKind::kFactAdder);
    }
  }

  std::string output = seg.detected ? seg.prefix + merged_query : merged_query;

  // Final global checks: drift of the edited query text against the original
  // query, and the length ratio of the whole composed prompt. When a Cleaner
  // edit was applied, its typo-relaxed cap carries over so a legitimate
  // high-typo repair is not undone here.
  double final_cap = policy.delta_max;
  if (cleaner) {
    final_cap = std::max(final_cap, drift::cleaner_cap(policy, profile.typo));
  }
  const auto query_drift = drift::compute_drift(original_query, working, policy, lex);
  if (query_drift.d_final > final_cap) {
    return fall_back();
  }
  const std::size_t original_len = text::char_count(original);
  const std::size_t output_len = text::char_count(output);
  if (original_len > 0 &&
      static_cast<double>(output_len) / static_cast<double>(original_len) > policy.rho_max) {
    return fall_back();
  }

  if (decision.applied_agents.empty() || output == original) {
    return fall_back();
  }

  decision.output = std::move(output);
  decision.fell_back = false;
  const std::size_t before = count_tokens(original, budget.counter);
  const std::size_t after = count_tokens(decision.output, budget.counter);
  decision.added_prompt_tokens = after > before ? after - before : 0;
  return decision;
}

}  // namespace poaas::merger
