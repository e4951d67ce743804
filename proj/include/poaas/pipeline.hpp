#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "poaas/agents.hpp"
#include "poaas/data.hpp"
#include "poaas/drift.hpp"
#include "poaas/guards.hpp"
#include "poaas/heuristics.hpp"
#include "poaas/merger.hpp"

namespace poaas::pipeline {

struct PipelineConfig {
  heuristics::RoutingThresholds thresholds;
  drift::DriftPolicy drift_policy;
  merger::TokenBudget budget;
  std::map<agents::AgentKind, std::string> agent_endpoints;
  bool mock_mode = true;
  int specialist_generation_cap = 512;
  int specialist_timeout_ms = 10000;

  // Throws ConfigError when a threshold or cap is out of range.
  void validate() const;

  nlohmann::json to_json() const;

  // Strict parser: unknown keys are errors so a typo in a threshold name can
  // never silently run with defaults.
  static PipelineConfig from_json(const nlohmann::json& j);

  // Partial update limited to thresholds, drift caps, and budget; endpoint
  // and mode changes are rejected.
  void apply_overrides(const nlohmann::json& overrides);

  // Stable digest over the canonical config serialization plus all data-file
  // digests.
  std::string config_hash(const data::Lexicons& lex) const;
};

struct OptimizationResult {
  std::string input;
  std::string output;
  bool skipped = false;
  heuristics::QualityProfile profile;
  std::vector<agents::AgentKind> selected_agents;
  std::vector<merger::Candidate> candidates;
  merger::MergeDecision merge;
  guards::FewShotSegmentation segmentation;
  std::map<std::string, double> stage_timings_ms;
  std::string run_id;
};

// Threshold routing: Cleaner for high typo, Fact-Adder for low completeness,
// Paraphraser for low fluency. May be empty.
std::set<agents::AgentKind> select_agents(const heuristics::QualityProfile& profile,
                                          const heuristics::RoutingThresholds& t);

std::string new_run_id();

class Pipeline {
 public:
  Pipeline(PipelineConfig config, std::shared_ptr<const data::Lexicons> lexicons);

  // Replaces the specialist invoker; used for fault injection and custom
  // transports. The default dispatches to mocks or to the configured HTTP
  // endpoints.
  using Invoker =
      std::function<agents::SpecialistResponse(agents::AgentKind, const std::string&)>;
  void set_invoker(Invoker invoker) { invoker_ = std::move(invoker); }

  // Algorithm: analyze, maybe skip, select agents, invoke, sanitize + guard +
  // drift-check every candidate, then merge with fail-safe fallback.
  // Throws EmptyInputError for prompts without tokens; every specialist
  // failure degrades to a discarded candidate instead.
  OptimizationResult optimize(std::string_view prompt) const;

  // Single-specialist path used by the per-agent service routes: invoke +
  // sanitize + guard + drift-check, no merging. Agent failures come back as
  // rejected candidates.
  merger::Candidate run_specialist(agents::AgentKind kind, std::string_view input) const;

  const PipelineConfig& config() const { return config_; }
  const data::Lexicons& lexicons() const { return *lexicons_; }
  std::shared_ptr<const data::Lexicons> lexicons_ptr() const { return lexicons_; }
  const std::string& config_hash() const { return config_hash_; }

 private:
  // Sanitize + guard + drift-check one raw specialist output.
  merger::Candidate finish_candidate(agents::AgentKind kind, const std::string& raw,
                                     const std::string& query,
                                     const heuristics::QualityProfile& profile) const;

  PipelineConfig config_;
  std::shared_ptr<const data::Lexicons> lexicons_;
  std::string config_hash_;
  Invoker invoker_;
};

}  // namespace poaas::pipeline
