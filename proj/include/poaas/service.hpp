#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "poaas/metrics.hpp"
#include "poaas/pipeline.hpp"

namespace httplib {
class Server;
}

namespace poaas::service {

struct ServiceConfig {
  std::string bind_host = "127.0.0.1";
  int port = 8080;                   // 0 picks a free port
  std::string artifact_dir = "runs";  // JSONL run artifacts, one file per date
};

// Append-only JSONL sink for run artifacts; writes are serialized through a
// single mutex and the file rotates by UTC date.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string dir);
  void append(const nlohmann::json& record);
  std::uint64_t written() const { return written_.load(); }
  std::string current_path() const;

 private:
  std::string dir_;
  mutable std::mutex mutex_;
  std::atomic<std::uint64_t> written_{0};
};

// The orchestrator: POST /infer, per-agent routes POST /clean, /paraphrase,
// /fact, and GET /metrics. Specialist failures never surface as 5xx; /infer
// degrades to the original prompt instead.
class Service {
 public:
  Service(std::shared_ptr<pipeline::Pipeline> pipeline, ServiceConfig config);
  ~Service();

  // Binds and serves on a background thread; returns false when the port
  // cannot be bound. After a successful start, port() reports the bound port.
  bool start();
  // Blocking variant for the CLI path.
  bool run();
  void stop();

  int port() const { return port_; }
  metrics::Registry& registry() { return registry_; }
  const std::string& config_hash() const;

 private:
  void install_routes();

  std::shared_ptr<pipeline::Pipeline> pipeline_;
  ServiceConfig config_;
  metrics::Registry registry_;
  ArtifactWriter artifacts_;
  std::unique_ptr<httplib::Server> server_;
  std::thread serve_thread_;
  int port_ = 0;
};

}  // namespace poaas::service
