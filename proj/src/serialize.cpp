#include "poaas/serialize.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace poaas::serialize {

using nlohmann::json;

json profile_json(const heuristics::QualityProfile& p) {
  return {{"typo", p.typo}, {"comp", p.comp}, {"flu", p.flu}, {"clar", p.clar}, {"q", p.q}};
}

json drift_report_json(const drift::DriftReport& r) {
  return {{"s_seq", r.s_seq},   {"s_jac", r.s_jac},         {"s_tok", r.s_tok},
          {"sim", r.sim},       {"d", r.d},                 {"p_content", r.p_content},
          {"d_final", r.d_final}, {"rho", r.rho}};
}

json guard_json(const guards::GuardVerdict& v) {
  json j = {{"passed", v.passed}, {"reason", std::string(guards::to_string(v.reason))}};
  if (v.repaired_text) j["repaired_text"] = *v.repaired_text;
  return j;
}

json candidate_json(const merger::Candidate& c) {
  json j = {{"agent", std::string(agents::to_string(c.agent))},
            {"sanitized_text", c.sanitized_text},
            {"guard", guard_json(c.guard)},
            {"accepted", c.accepted}};
  j["drift"] = drift_report_json(c.drift.report);
  j["drift_reason"] = std::string(drift::to_string(c.drift.reason));
  if (!c.fact_bullets.empty()) j["fact_bullets"] = c.fact_bullets;
  if (!c.reject_reason.empty()) j["reject_reason"] = c.reject_reason;
  return j;
}

json merge_json(const merger::MergeDecision& m) {
  json applied = json::array();
  for (auto a : m.applied_agents) applied.push_back(std::string(agents::to_string(a)));
  json rejected = json::array();
  for (const auto& [agent, reason] : m.rejected) {
    rejected.push_back({{"agent", std::string(agents::to_string(agent))}, {"reason", reason}});
  }
  return {{"output", m.output},
          {"applied_agents", applied},
          {"rejected", rejected},
          {"fell_back", m.fell_back},
          {"added_prompt_tokens", m.added_prompt_tokens}};
}

json artifact_json(const pipeline::OptimizationResult& result, const std::string& config_hash,
                   const std::string& timestamp) {
  json candidates = json::array();
  for (const auto& c : result.candidates) candidates.push_back(candidate_json(c));
  json selected = json::array();
  for (auto a : result.selected_agents) selected.push_back(std::string(agents::to_string(a)));
  return {{"run_id", result.run_id},
          {"timestamp", timestamp},
          {"input", result.input},
          {"output", result.output},
          {"skipped", result.skipped},
          {"profile", profile_json(result.profile)},
          {"selected_agents", selected},
          {"candidates", candidates},
          {"merge", merge_json(result.merge)},
          {"timings_ms", result.stage_timings_ms},
          {"config_hash", config_hash}};
}

json infer_response_json(const pipeline::OptimizationResult& result,
                         const std::string& config_hash) {
  json applied = json::array();
  for (auto a : result.merge.applied_agents) {
    applied.push_back(std::string(agents::to_string(a)));
  }
  json rejected = json::array();
  for (const auto& [agent, reason] : result.merge.rejected) {
    rejected.push_back({{"agent", std::string(agents::to_string(agent))}, {"reason", reason}});
  }
  return {{"output", result.output},
          {"skipped", result.skipped},
          {"applied_agents", applied},
          {"rejected", rejected},
          {"fell_back", result.merge.fell_back},
          {"timings_ms", result.stage_timings_ms},
          {"added_prompt_tokens", result.merge.added_prompt_tokens},
          {"run_id", result.run_id},
          {"config_hash", config_hash}};
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

}  // namespace poaas::serialize
