#pragma once

#include <nlohmann/json.hpp>

#include "poaas/drift.hpp"
#include "poaas/guards.hpp"
#include "poaas/heuristics.hpp"
#include "poaas/merger.hpp"
#include "poaas/pipeline.hpp"

// JSON views of pipeline results, shared by the service responses, run
// artifacts, and the CLI batch reports. Field names are lower_snake_case.
namespace poaas::serialize {

nlohmann::json profile_json(const heuristics::QualityProfile& p);
nlohmann::json drift_report_json(const drift::DriftReport& r);
nlohmann::json guard_json(const guards::GuardVerdict& v);
nlohmann::json candidate_json(const merger::Candidate& c);
nlohmann::json merge_json(const merger::MergeDecision& m);

// Full run artifact record (one JSONL line in the run log).
nlohmann::json artifact_json(const pipeline::OptimizationResult& result,
                             const std::string& config_hash, const std::string& timestamp);

// Compact per-request response body for POST /infer.
nlohmann::json infer_response_json(const pipeline::OptimizationResult& result,
                                   const std::string& config_hash);

std::string iso8601_utc_now();

}  // namespace poaas::serialize
