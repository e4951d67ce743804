#include "poaas/batch.hpp"

#include <fstream>

#include "poaas/error.hpp"

namespace poaas::batch {

using nlohmann::json;

json BatchReport::to_json(bool include_outputs) const {
  json lines = json::array();
  for (const auto& r : results) {
    json rec = {{"line", r.line},
                {"skipped", r.skipped},
                {"fell_back", r.fell_back},
                {"applied_agents", r.applied_agents},
                {"selected_agents", r.selected_agents},
                {"added_prompt_tokens", r.added_prompt_tokens},
                {"refine_ms", r.refine_ms},
                {"error", r.error}};
    if (include_outputs) rec["output"] = r.output;
    lines.push_back(std::move(rec));
  }
  return {{"report_version", report_version},
          {"results", lines},
          {"aggregates",
           {{"skip_rate", skip_rate},
            {"mean_specialist_calls_per_query", mean_specialist_calls_per_query},
            {"mean_added_prompt_tokens", mean_added_prompt_tokens},
            {"mean_refinement_latency_ms", mean_refinement_latency_ms},
            {"fallback_rate", fallback_rate},
            {"warning_count", warning_count}}}};
}

BatchReport run_batch(const pipeline::Pipeline& pipe, const std::vector<std::string>& lines) {
  BatchReport report;
  report.results.reserve(lines.size());

  std::size_t processed = 0;
  std::size_t skips = 0;
  std::size_t fallbacks = 0;
  double total_calls = 0.0;
  double total_added = 0.0;
  double total_latency = 0.0;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    LineResult r;
    r.line = i;
    try {
      const auto result = pipe.optimize(lines[i]);
      r.skipped = result.skipped;
      r.fell_back = !result.skipped && result.merge.fell_back;
      for (auto a : result.merge.applied_agents) {
        r.applied_agents.emplace_back(agents::to_string(a));
      }
      for (auto a : result.selected_agents) {
        r.selected_agents.emplace_back(agents::to_string(a));
      }
      r.added_prompt_tokens = result.merge.added_prompt_tokens;
      r.output = result.output;
      for (const char* stage : {"invoke", "guard", "merge"}) {
        auto it = result.stage_timings_ms.find(stage);
        if (it != result.stage_timings_ms.end()) r.refine_ms += it->second;
      }
      ++processed;
      if (r.skipped) ++skips;
      if (r.fell_back) ++fallbacks;
      total_calls += static_cast<double>(result.selected_agents.size());
      total_added += static_cast<double>(r.added_prompt_tokens);
      total_latency += r.refine_ms;
    } catch (const EmptyInputError&) {
      r.error = true;
      r.output = lines[i];
      ++report.warning_count;
    }
    report.results.push_back(std::move(r));
  }

  if (processed > 0) {
    const double n = static_cast<double>(processed);
    report.skip_rate = static_cast<double>(skips) / n;
    report.mean_specialist_calls_per_query = total_calls / n;
    report.mean_added_prompt_tokens = total_added / n;
    report.mean_refinement_latency_ms = total_latency / n;
    report.fallback_rate = static_cast<double>(fallbacks) / n;
  }
  return report;
}

std::vector<std::string> read_lines_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open file: " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace poaas::batch
