#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "poaas/pipeline.hpp"

namespace poaas::batch {

struct LineResult {
  std::size_t line = 0;
  bool skipped = false;
  bool fell_back = false;
  std::vector<std::string> applied_agents;
  std::vector<std::string> selected_agents;
  std::size_t added_prompt_tokens = 0;
  std::string output;
  double refine_ms = 0.0;  // invoke + guard + merge
  bool error = false;      // empty line or other per-line failure
};

struct BatchReport {
  int report_version = 1;
  std::vector<LineResult> results;
  // aggregates, recomputable from the per-line records
  double skip_rate = 0.0;
  double mean_specialist_calls_per_query = 0.0;
  double mean_added_prompt_tokens = 0.0;
  double mean_refinement_latency_ms = 0.0;
  double fallback_rate = 0.0;
  std::size_t warning_count = 0;

  nlohmann::json to_json(bool include_outputs = true) const;
};

// Runs the pipeline over every line, input order preserved. Per-line empty
// input becomes a warning and a pass-through record, never a batch failure.
BatchReport run_batch(const pipeline::Pipeline& pipe, const std::vector<std::string>& lines);

std::vector<std::string> read_lines_file(const std::string& path);

}  // namespace poaas::batch
