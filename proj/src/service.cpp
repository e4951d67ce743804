#include "poaas/service.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <httplib.h>

#include "poaas/error.hpp"
#include "poaas/serialize.hpp"

namespace poaas::service {

namespace {

using nlohmann::json;

constexpr const char* kConfigHashHeader = "X-Poaas-Config-Hash";

void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply_json(res, status, json{{"error", message}});
}

std::string utc_date_stamp() {
  const std::string iso = serialize::iso8601_utc_now();  // YYYY-MM-DDThh:mm:ssZ
  std::string stamp = iso.substr(0, 10);
  stamp.erase(std::remove(stamp.begin(), stamp.end(), '-'), stamp.end());
  return stamp;
}

}  // namespace

ArtifactWriter::ArtifactWriter(std::string dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ArtifactWriter::current_path() const {
  return (std::filesystem::path(dir_) / ("poaas_runs_" + utc_date_stamp() + ".jsonl"))
      .string();
}

void ArtifactWriter::append(const json& record) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ofstream out(current_path(), std::ios::app);
  out << record.dump() << "\n";
  out.flush();
  written_.fetch_add(1);
}

Service::Service(std::shared_ptr<pipeline::Pipeline> pipeline, ServiceConfig config)
    : pipeline_(std::move(pipeline)),
      config_(std::move(config)),
      artifacts_(config_.artifact_dir),
      server_(std::make_unique<httplib::Server>()) {
  registry_.register_histogram("poaas_stage_analyze_latency_seconds",
                               {0.0001, 0.001, 0.01, 0.1, 1.0});
  registry_.register_histogram("poaas_stage_route_latency_seconds",
                               {0.0001, 0.001, 0.01, 0.1, 1.0});
  registry_.register_histogram("poaas_stage_invoke_latency_seconds",
                               {0.001, 0.01, 0.1, 1.0, 10.0});
  registry_.register_histogram("poaas_stage_guard_latency_seconds",
                               {0.0001, 0.001, 0.01, 0.1, 1.0});
  registry_.register_histogram("poaas_stage_merge_latency_seconds",
                               {0.0001, 0.001, 0.01, 0.1, 1.0});
  registry_.register_histogram("poaas_added_prompt_tokens", {0, 10, 30, 60, 120, 240});
  install_routes();
}

Service::~Service() { stop(); }

const std::string& Service::config_hash() const { return pipeline_->config_hash(); }

void Service::install_routes() {
  auto& svr = *server_;

  svr.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
    res.set_header(kConfigHashHeader, pipeline_->config_hash());
  });

  const auto record_metrics = [this](const pipeline::OptimizationResult& result) {
    registry_.counter_add("poaas_requests_total");
    if (result.skipped) registry_.counter_add("poaas_skips_total");
    if (!result.skipped && result.merge.fell_back) {
      registry_.counter_add("poaas_fallbacks_total");
    }
    for (auto kind : result.selected_agents) {
      registry_.counter_add("poaas_agent_invocations_total", "agent",
                            std::string(agents::to_string(kind)));
    }
    for (const auto& [agent, reason] : result.merge.rejected) {
      registry_.counter_add("poaas_guard_rejections_total", "reason", reason);
    }
    for (const auto& [stage, ms] : result.stage_timings_ms) {
      registry_.observe("poaas_stage_" + stage + "_latency_seconds", ms / 1000.0);
    }
    registry_.observe("poaas_added_prompt_tokens",
                      static_cast<double>(result.merge.added_prompt_tokens));
  };

  svr.Post("/infer", [this, record_metrics](const httplib::Request& req,
                                            httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      reply_error(res, 400, "request body is not valid JSON");
      return;
    }
    if (!body.is_object() || !body.contains("prompt") || !body["prompt"].is_string()) {
      reply_error(res, 400, "missing string field: prompt");
      return;
    }
    const std::string prompt = body["prompt"].get<std::string>();

    std::shared_ptr<pipeline::Pipeline> pipe = pipeline_;
    if (body.contains("config_overrides") && !body["config_overrides"].is_null()) {
      try {
        auto cfg = pipeline_->config();
        cfg.apply_overrides(body["config_overrides"]);
        pipe = std::make_shared<pipeline::Pipeline>(cfg, pipeline_->lexicons_ptr());
      } catch (const ConfigError& e) {
        reply_error(res, 400, e.what());
        return;
      }
    }

    try {
      const auto result = pipe->optimize(prompt);
      record_metrics(result);
      artifacts_.append(
          serialize::artifact_json(result, pipe->config_hash(), serialize::iso8601_utc_now()));
      reply_json(res, 200, serialize::infer_response_json(result, pipe->config_hash()));
    } catch (const EmptyInputError&) {
      reply_error(res, 400, "prompt must not be empty");
    }
  });

  const auto specialist_route = [this](agents::AgentKind kind) {
    return [this, kind](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception&) {
        reply_error(res, 400, "request body is not valid JSON");
        return;
      }
      if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
        reply_error(res, 400, "missing string field: text");
        return;
      }
      try {
        const auto candidate = pipeline_->run_specialist(kind, body["text"].get<std::string>());
        json out = {{"output", candidate.sanitized_text},
                    {"accepted", candidate.accepted},
                    {"guard", serialize::guard_json(candidate.guard)},
                    {"drift", serialize::drift_report_json(candidate.drift.report)},
                    {"drift_reason", std::string(drift::to_string(candidate.drift.reason))}};
        if (!candidate.reject_reason.empty()) out["reject_reason"] = candidate.reject_reason;
        reply_json(res, 200, out);
      } catch (const EmptyInputError&) {
        reply_error(res, 400, "text must not be empty");
      }
    };
  };
  svr.Post("/clean", specialist_route(agents::AgentKind::kCleaner));
  svr.Post("/paraphrase", specialist_route(agents::AgentKind::kParaphraser));
  svr.Post("/fact", specialist_route(agents::AgentKind::kFactAdder));

  svr.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content(registry_.expose(), "text/plain; version=0.0.4");
  });
}

bool Service::start() {
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.bind_host);
    if (port_ < 0) return false;
  } else {
    if (!server_->bind_to_port(config_.bind_host, config_.port)) return false;
    port_ = config_.port;
  }
  serve_thread_ = std::thread([this]() { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return true;
}

bool Service::run() {
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.bind_host);
    if (port_ < 0) return false;
    return server_->listen_after_bind();
  }
  port_ = config_.port;
  return server_->listen(config_.bind_host, config_.port);
}

void Service::stop() {
  if (server_) server_->stop();
  if (serve_thread_.joinable()) serve_thread_.join();
}

}  // namespace poaas::service
