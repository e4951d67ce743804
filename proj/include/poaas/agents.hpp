#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "poaas/agent_kind.hpp"
#include "poaas/data.hpp"

namespace poaas::agents {

struct SpecialistRequest {
  AgentKind kind = AgentKind::kCleaner;
  std::string input_text;  // final query span only for few-shot prompts
  std::string instruction_template_id = "v1";
  int generation_cap = 512;
};

struct SpecialistResponse {
  std::string raw_output;
  double latency_ms = 0.0;
  std::size_t output_token_estimate = 0;
  bool is_none = false;  // Fact-Adder abstention
};

// A single completion call. Implementations must be safe for concurrent use
// from multiple request fan-outs.
class Transport {
 public:
  virtual ~Transport() = default;
  // Throws AgentTimeoutError / AgentProtocolError on failure.
  virtual std::string complete(const std::string& instruction) = 0;
};

struct HttpTransportOptions {
  std::string url;                 // http://host:port/path
  std::string model = "poaas-specialist";
  int timeout_ms = 10000;          // no retries; a timed-out candidate is dropped
  int max_tokens = 512;
  double temperature = 0.2;
  double top_p = 0.9;
  std::uint64_t seed = 0;
};

// JSON-over-HTTP completion client compatible with the common completion wire
// formats: sends {model, prompt, max_tokens, temperature, top_p, seed} and
// reads choices[0].text, choices[0].message.content, or a top-level
// text/output field.
std::shared_ptr<Transport> make_http_transport(const HttpTransportOptions& options);

// Fills the per-agent instruction template. Throws ConfigError for unknown
// template ids.
std::string render_instruction(AgentKind kind, std::string_view input_text,
                               const std::string& template_id = "v1");

// Calls the transport and wraps the result; Fact-Adder NONE outputs are
// flagged. Timeouts and protocol failures propagate as exceptions for the
// pipeline to turn into discarded candidates.
SpecialistResponse invoke(const SpecialistRequest& request, Transport& transport);

// Deterministic desk-scale specialists.
SpecialistResponse mock_cleaner(std::string_view input, const data::Lexicons& lex);
SpecialistResponse mock_paraphraser(std::string_view input);
SpecialistResponse mock_fact_adder(std::string_view input, const data::Lexicons& lex);

SpecialistResponse run_mock(AgentKind kind, std::string_view input, const data::Lexicons& lex);

}  // namespace poaas::agents
