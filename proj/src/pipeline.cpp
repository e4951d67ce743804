#include "poaas/pipeline.hpp"

#include <chrono>
#include <future>
#include <random>

#include "poaas/error.hpp"
#include "poaas/text.hpp"

namespace poaas::pipeline {

namespace {

using nlohmann::json;

void check_unit(double v, const char* name) {
  if (v < 0.0 || v > 1.0) {
    throw ConfigError(std::string(name) + " must be in [0,1]");
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& scope) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown config key: " + scope + it.key());
    }
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json thresholds_to_json(const heuristics::RoutingThresholds& t) {
  return {{"tau_typo", t.tau_typo},       {"tau_comp", t.tau_comp},
          {"tau_flu", t.tau_flu},         {"tau_skip", t.tau_skip},
          {"tau_clar_fixed", t.tau_clar_fixed}, {"typo_skip_max", t.typo_skip_max}};
}

void thresholds_from_json(const json& j, heuristics::RoutingThresholds& t) {
  reject_unknown_keys(
      j, {"tau_typo", "tau_comp", "tau_flu", "tau_skip", "tau_clar_fixed", "typo_skip_max"},
      "thresholds.");
  read_if(j, "tau_typo", t.tau_typo);
  read_if(j, "tau_comp", t.tau_comp);
  read_if(j, "tau_flu", t.tau_flu);
  read_if(j, "tau_skip", t.tau_skip);
  read_if(j, "tau_clar_fixed", t.tau_clar_fixed);
  read_if(j, "typo_skip_max", t.typo_skip_max);
}

json drift_to_json(const drift::DriftPolicy& d) {
  return {{"delta_clean_base", d.delta_clean_base},
          {"delta_para", d.delta_para},
          {"delta_para_relaxed", d.delta_para_relaxed},
          {"delta_max", d.delta_max},
          {"rho_max", d.rho_max},
          {"preservation_floor", d.preservation_floor},
          {"penalty_weight", d.penalty_weight}};
}

void drift_from_json(const json& j, drift::DriftPolicy& d) {
  reject_unknown_keys(j,
                      {"delta_clean_base", "delta_para", "delta_para_relaxed", "delta_max",
                       "rho_max", "preservation_floor", "penalty_weight"},
                      "drift.");
  read_if(j, "delta_clean_base", d.delta_clean_base);
  read_if(j, "delta_para", d.delta_para);
  read_if(j, "delta_para_relaxed", d.delta_para_relaxed);
  read_if(j, "delta_max", d.delta_max);
  read_if(j, "rho_max", d.rho_max);
  read_if(j, "preservation_floor", d.preservation_floor);
  read_if(j, "penalty_weight", d.penalty_weight);
}

json budget_to_json(const merger::TokenBudget& b) {
  return {{"fact_token_cap", b.fact_token_cap},
          {"fact_bullet_cap", b.fact_bullet_cap},
          {"token_counter", b.counter}};
}

void budget_from_json(const json& j, merger::TokenBudget& b) {
  reject_unknown_keys(j, {"fact_token_cap", "fact_bullet_cap", "token_counter"}, "budget.");
  read_if(j, "fact_token_cap", b.fact_token_cap);
  read_if(j, "fact_bullet_cap", b.fact_bullet_cap);
  read_if(j, "token_counter", b.counter);
}

}  // namespace

void PipelineConfig::validate() const {
  check_unit(thresholds.tau_typo, "tau_typo");
  check_unit(thresholds.tau_comp, "tau_comp");
  check_unit(thresholds.tau_flu, "tau_flu");
  check_unit(thresholds.tau_skip, "tau_skip");
  check_unit(thresholds.tau_clar_fixed, "tau_clar_fixed");
  check_unit(thresholds.typo_skip_max, "typo_skip_max");
  check_unit(drift_policy.delta_clean_base, "delta_clean_base");
  check_unit(drift_policy.delta_para, "delta_para");
  check_unit(drift_policy.delta_para_relaxed, "delta_para_relaxed");
  check_unit(drift_policy.delta_max, "delta_max");
  check_unit(drift_policy.preservation_floor, "preservation_floor");
  check_unit(drift_policy.penalty_weight, "penalty_weight");
  if (!(drift_policy.delta_para <= drift_policy.delta_para_relaxed &&
        drift_policy.delta_para_relaxed <= drift_policy.delta_max)) {
    throw ConfigError("expected delta_para <= delta_para_relaxed <= delta_max");
  }
  if (drift_policy.rho_max <= 1.0) {
    throw ConfigError("rho_max must be > 1");
  }
  if (budget.fact_bullet_cap == 0 || budget.fact_token_cap == 0) {
    throw ConfigError("fact caps must be positive");
  }
  merger::count_tokens("probe", budget.counter);  // rejects unknown counter ids
  if (specialist_generation_cap <= 0) {
    throw ConfigError("specialist_generation_cap must be positive");
  }
  if (specialist_timeout_ms <= 0) {
    throw ConfigError("specialist_timeout_ms must be positive");
  }
}

json PipelineConfig::to_json() const {
  json endpoints = json::object();
  for (const auto& [kind, url] : agent_endpoints) {
    endpoints[std::string(agents::to_string(kind))] = url;
  }
  return {{"thresholds", thresholds_to_json(thresholds)},
          {"drift", drift_to_json(drift_policy)},
          {"budget", budget_to_json(budget)},
          {"agent_endpoints", endpoints},
          {"mock_mode", mock_mode},
          {"specialist_generation_cap", specialist_generation_cap},
          {"specialist_timeout_ms", specialist_timeout_ms}};
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig cfg;
  reject_unknown_keys(j,
                      {"thresholds", "drift", "budget", "agent_endpoints", "mock_mode",
                       "specialist_generation_cap", "specialist_timeout_ms"},
                      "");
  if (j.contains("thresholds")) thresholds_from_json(j.at("thresholds"), cfg.thresholds);
  if (j.contains("drift")) drift_from_json(j.at("drift"), cfg.drift_policy);
  if (j.contains("budget")) budget_from_json(j.at("budget"), cfg.budget);
  if (j.contains("agent_endpoints")) {
    for (auto it = j.at("agent_endpoints").begin(); it != j.at("agent_endpoints").end(); ++it) {
      cfg.agent_endpoints[agents::agent_kind_from_string(it.key())] =
          it.value().get<std::string>();
    }
  }
  read_if(j, "mock_mode", cfg.mock_mode);
  read_if(j, "specialist_generation_cap", cfg.specialist_generation_cap);
  read_if(j, "specialist_timeout_ms", cfg.specialist_timeout_ms);
  cfg.validate();
  return cfg;
}

void PipelineConfig::apply_overrides(const json& overrides) {
  reject_unknown_keys(overrides, {"thresholds", "drift", "budget"}, "overrides.");
  if (overrides.contains("thresholds")) {
    thresholds_from_json(overrides.at("thresholds"), thresholds);
  }
  if (overrides.contains("drift")) {
    drift_from_json(overrides.at("drift"), drift_policy);
  }
  if (overrides.contains("budget")) {
    budget_from_json(overrides.at("budget"), budget);
  }
  validate();
}

std::string PipelineConfig::config_hash(const data::Lexicons& lex) const {
  json payload = to_json();
  json files = json::object();
  for (const auto& [name, digest] : lex.file_digests()) {
    files[name] = digest;
  }
  payload["data_files"] = files;
  return text::fnv1a64_hex(payload.dump());
}

std::set<agents::AgentKind> select_agents(const heuristics::QualityProfile& profile,
                                          const heuristics::RoutingThresholds& t) {
  std::set<agents::AgentKind> selected;
  if (profile.typo > t.tau_typo) selected.insert(agents::AgentKind::kCleaner);
  if (profile.comp < t.tau_comp) selected.insert(agents::AgentKind::kFactAdder);
  if (profile.flu < t.tau_flu) selected.insert(agents::AgentKind::kParaphraser);
  return selected;
}

std::string new_run_id() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_int_distribution<std::uint64_t> dist;
  const std::uint64_t hi = dist(rng);
  const std::uint64_t lo = dist(rng);
  static const char* hex = "0123456789abcdef";
  std::string id = "xxxxxxxx-xxxx-4xxx-yxxx-xxxxxxxxxxxx";
  std::uint64_t bits = hi;
  int used = 0;
  for (char& c : id) {
    if (c == '-' || c == '4') continue;
    if (used == 16) {
      bits = lo;
    }
    const auto nibble = static_cast<unsigned>(bits & 0xF);
    bits >>= 4;
    ++used;
    if (c == 'y') {
      c = hex[(nibble & 0x3) | 0x8];  // UUIDv4 variant bits
    } else {
      c = hex[nibble];
    }
  }
  return id;
}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<const data::Lexicons> lexicons)
    : config_(std::move(config)), lexicons_(std::move(lexicons)) {
  config_.validate();
  config_hash_ = config_.config_hash(*lexicons_);

  if (config_.mock_mode) {
    invoker_ = [lex = lexicons_](agents::AgentKind kind, const std::string& input) {
      return agents::run_mock(kind, input, *lex);
    };
  } else {
    // one transport per configured endpoint, shared across requests
    std::map<agents::AgentKind, std::shared_ptr<agents::Transport>> transports;
    for (const auto& [kind, url] : config_.agent_endpoints) {
      agents::HttpTransportOptions opts;
      opts.url = url;
      opts.timeout_ms = config_.specialist_timeout_ms;
      opts.max_tokens = config_.specialist_generation_cap;
      transports[kind] = agents::make_http_transport(opts);
    }
    invoker_ = [transports, cap = config_.specialist_generation_cap](
                   agents::AgentKind kind, const std::string& input) {
      auto it = transports.find(kind);
      if (it == transports.end()) {
        throw AgentTimeoutError("no endpoint configured for " +
                                std::string(agents::to_string(kind)));
      }
      agents::SpecialistRequest req;
      req.kind = kind;
      req.input_text = input;
      req.generation_cap = cap;
      return agents::invoke(req, *it->second);
    };
  }
}

OptimizationResult Pipeline::optimize(std::string_view prompt) const {
  using clock = std::chrono::steady_clock;
  const auto ms_since = [](clock::time_point start) {
    return std::chrono::duration<double, std::milli>(clock::now() - start).count();
  };

  OptimizationResult result;
  result.input.assign(prompt);
  result.run_id = new_run_id();
  result.stage_timings_ms = {
      {"analyze", 0.0}, {"route", 0.0}, {"invoke", 0.0}, {"guard", 0.0}, {"merge", 0.0}};

  auto t = clock::now();
  const auto tokenized = heuristics::TokenizedPrompt::from_text(prompt);
  if (tokenized.empty()) {
    throw EmptyInputError("optimize: prompt has no tokens");
  }
  result.profile = heuristics::analyze(tokenized, config_.thresholds, *lexicons_);
  result.stage_timings_ms["analyze"] = ms_since(t);

  if (heuristics::should_skip(result.profile, config_.thresholds)) {
    result.skipped = true;
    result.output = result.input;
    result.merge.output = result.input;
    return result;
  }

  t = clock::now();
  const auto selected = select_agents(result.profile, config_.thresholds);
  result.selected_agents.assign(selected.begin(), selected.end());
  result.segmentation = guards::detect_fewshot(prompt);
  result.stage_timings_ms["route"] = ms_since(t);

  const std::string query =
      result.segmentation.detected ? result.segmentation.final_query : result.input;

  // Fan out one call per selected agent; completion order cannot matter
  // because merge is precedence-sorted and candidates are keyed by agent.
  t = clock::now();
  struct Outcome {
    agents::AgentKind kind;
    agents::SpecialistResponse response;
    std::string error_code;
  };
  std::vector<Outcome> outcomes;
  {
    std::vector<std::pair<agents::AgentKind, std::future<agents::SpecialistResponse>>> futures;
    for (agents::AgentKind kind : agents::kAllAgentKinds) {
      if (!selected.count(kind)) continue;
      futures.emplace_back(kind, std::async(std::launch::async, [this, kind, &query]() {
                             return invoker_(kind, query);
                           }));
    }
    for (auto& [kind, future] : futures) {
      Outcome outcome;
      outcome.kind = kind;
      try {
        outcome.response = future.get();
      } catch (const AgentTimeoutError&) {
        outcome.error_code = "TIMEOUT";
      } catch (const AgentProtocolError&) {
        outcome.error_code = "PROTOCOL_ERROR";
      } catch (const std::exception&) {
        outcome.error_code = "AGENT_FAILURE";
      }
      outcomes.push_back(std::move(outcome));
    }
  }
  result.stage_timings_ms["invoke"] = ms_since(t);

  t = clock::now();
  for (const auto& outcome : outcomes) {
    merger::Candidate candidate;
    candidate.agent = outcome.kind;
    if (!outcome.error_code.empty()) {
      candidate.reject_reason = outcome.error_code;
      result.candidates.push_back(std::move(candidate));
      continue;
    }
    if (outcome.kind == agents::AgentKind::kFactAdder && outcome.response.is_none) {
      candidate.reject_reason = "NONE";
      result.candidates.push_back(std::move(candidate));
      continue;
    }
    result.candidates.push_back(
        finish_candidate(outcome.kind, outcome.response.raw_output, query, result.profile));
  }
  result.stage_timings_ms["guard"] = ms_since(t);

  t = clock::now();
  result.merge = merger::merge(result.input, result.candidates, result.segmentation,
                               config_.budget, config_.drift_policy, result.profile,
                               *lexicons_);
  result.stage_timings_ms["merge"] = ms_since(t);

  result.output = result.merge.output;
  return result;
}

merger::Candidate Pipeline::run_specialist(agents::AgentKind kind,
                                           std::string_view input) const {
  const auto tokenized = heuristics::TokenizedPrompt::from_text(input);
  if (tokenized.empty()) {
    throw EmptyInputError("run_specialist: text has no tokens");
  }
  const auto profile = heuristics::analyze(tokenized, config_.thresholds, *lexicons_);
  const std::string query(input);

  merger::Candidate candidate;
  candidate.agent = kind;
  try {
    const auto response = invoker_(kind, query);
    if (kind == agents::AgentKind::kFactAdder && response.is_none) {
      candidate.sanitized_text = "NONE";
      candidate.reject_reason = "NONE";
      return candidate;
    }
    return finish_candidate(kind, response.raw_output, query, profile);
  } catch (const AgentTimeoutError&) {
    candidate.reject_reason = "TIMEOUT";
  } catch (const AgentProtocolError&) {
    candidate.reject_reason = "PROTOCOL_ERROR";
  }
  return candidate;
}

merger::Candidate Pipeline::finish_candidate(agents::AgentKind kind, const std::string& raw,
                                             const std::string& query,
                                             const heuristics::QualityProfile& profile) const {
  merger::Candidate candidate;
  candidate.agent = kind;

  if (kind == agents::AgentKind::kFactAdder) {
    const auto bullets = guards::parse_fact_bullets(raw, *lexicons_);
    const auto filtered = guards::fact_guard(query, bullets, config_.budget, *lexicons_);
    if (filtered.none) {
      candidate.guard = guards::GuardVerdict::fail(filtered.reason);
      candidate.sanitized_text = "NONE";
      candidate.reject_reason = filtered.reason == guards::GuardReason::kOk
                                    ? "NONE"
                                    : std::string(guards::to_string(filtered.reason));
      return candidate;
    }
    candidate.guard = guards::GuardVerdict::ok();
    candidate.fact_bullets = filtered.bullets;
    std::vector<std::string> rendered;
    rendered.reserve(filtered.bullets.size());
    for (const auto& b : filtered.bullets) rendered.push_back("- " + b);
    candidate.sanitized_text = text::join(rendered, "\n");
    candidate.drift = drift::within_drift(query, candidate.sanitized_text, kind, profile,
                                          config_.drift_policy, *lexicons_);
    if (!candidate.drift.accepted) {
      candidate.reject_reason = std::string(drift::to_string(candidate.drift.reason));
      return candidate;
    }
    candidate.accepted = true;
    return candidate;
  }

  const std::string sanitized = guards::sanitize(raw, *lexicons_);
  if (sanitized.empty()) {
    candidate.guard = guards::GuardVerdict::fail(guards::GuardReason::kMetaCommentaryOnly);
    candidate.reject_reason = "META_COMMENTARY_ONLY";
    return candidate;
  }
  candidate.sanitized_text = sanitized;
  candidate.guard = kind == agents::AgentKind::kCleaner
                        ? guards::cleaner_guard(query, sanitized, *lexicons_)
                        : guards::paraphrase_guard(query, sanitized, *lexicons_);
  if (!candidate.guard.passed) {
    candidate.reject_reason = std::string(guards::to_string(candidate.guard.reason));
    return candidate;
  }
  candidate.drift =
      drift::within_drift(query, sanitized, kind, profile, config_.drift_policy, *lexicons_);
  if (!candidate.drift.accepted) {
    candidate.reject_reason = std::string(drift::to_string(candidate.drift.reason));
    return candidate;
  }
  candidate.accepted = true;
  return candidate;
}

}  // namespace poaas::pipeline
