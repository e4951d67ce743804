#include "poaas/agents.hpp"

#include <chrono>
#include <sstream>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "poaas/error.hpp"
#include "poaas/text.hpp"

namespace poaas::agents {

namespace {

using nlohmann::json;

const std::unordered_set<std::string>& wh_words() {
  static const std::unordered_set<std::string> kWh = {"what", "why",   "how",
                                                      "when", "where", "who"};
  return kWh;
}

bool normalized_is_none(std::string_view raw) {
  std::string t = text::trim(raw);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') {
    t = text::trim(t.substr(1, t.size() - 2));
  }
  return text::ascii_lower(t) == "none";
}

// Splits a URL into base ("http://host:port") and path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint URL must include a scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(HttpTransportOptions options) : options_(std::move(options)) {
    std::tie(base_, path_) = split_url(options_.url);
  }

  std::string complete(const std::string& instruction) override {
    httplib::Client client(base_);
    client.set_connection_timeout(0, options_.timeout_ms * 1000LL);
    client.set_read_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);
    client.set_write_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);

    json body = {{"model", options_.model},
                 {"prompt", instruction},
                 {"max_tokens", options_.max_tokens},
                 {"temperature", options_.temperature},
                 {"top_p", options_.top_p},
                 {"seed", options_.seed}};

    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res) {
      const auto err = httplib::to_string(res.error());
      if (res.error() == httplib::Error::ConnectionTimeout ||
          res.error() == httplib::Error::Read || res.error() == httplib::Error::Write) {
        throw AgentTimeoutError("specialist call timed out: " + err);
      }
      throw AgentTimeoutError("specialist unreachable: " + err);
    }
    if (res->status != 200) {
      throw AgentProtocolError("specialist returned HTTP " + std::to_string(res->status));
    }

    json parsed;
    try {
      parsed = json::parse(res->body);
    } catch (const json::exception& e) {
      throw AgentProtocolError(std::string("specialist response is not JSON: ") + e.what());
    }
    if (parsed.contains("choices") && parsed["choices"].is_array() &&
        !parsed["choices"].empty()) {
      const auto& choice = parsed["choices"][0];
      if (choice.contains("text") && choice["text"].is_string()) {
        return choice["text"].get<std::string>();
      }
      if (choice.contains("message") && choice["message"].contains("content") &&
          choice["message"]["content"].is_string()) {
        return choice["message"]["content"].get<std::string>();
      }
    }
    for (const char* key : {"text", "output", "completion"}) {
      if (parsed.contains(key) && parsed[key].is_string()) {
        return parsed[key].get<std::string>();
      }
    }
    throw AgentProtocolError("specialist response has no completion field");
  }

 private:
  HttpTransportOptions options_;
  std::string base_;
  std::string path_;
};

}  // namespace

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kCleaner: return "cleaner";
    case AgentKind::kParaphraser: return "paraphraser";
    case AgentKind::kFactAdder: return "fact_adder";
  }
  return "cleaner";
}

AgentKind agent_kind_from_string(std::string_view name) {
  if (name == "cleaner") return AgentKind::kCleaner;
  if (name == "paraphraser") return AgentKind::kParaphraser;
  if (name == "fact_adder") return AgentKind::kFactAdder;
  throw ConfigError("unknown agent kind: " + std::string(name));
}

std::shared_ptr<Transport> make_http_transport(const HttpTransportOptions& options) {
  return std::make_shared<HttpTransport>(options);
}

std::string render_instruction(AgentKind kind, std::string_view input_text,
                               const std::string& template_id) {
  if (template_id != "v1") {
    throw ConfigError("unknown instruction template id: " + template_id);
  }
  std::ostringstream out;
  switch (kind) {
    case AgentKind::kCleaner:
      out << "Fix typos, spacing, and punctuation in the text below. Make the "
             "smallest possible edit. Preserve every number, name, URL, and "
             "quoted span verbatim. Never add new facts or constraints. "
             "Return only the corrected text.\n\nText:\n"
          << input_text;
      break;
    case AgentKind::kParaphraser:
      out << "Rewrite the text below for clarity and fluency while preserving "
             "its meaning, intent, entities, numbers, and constraints. Keep a "
             "question a question. Do not make it longer than needed. Return "
             "only the rewrite.\n\nText:\n"
          << input_text;
      break;
    case AgentKind::kFactAdder:
      out << "List up to 3 short declarative factual bullets (at most 120 "
             "tokens total) that give background for the request below. Each "
             "bullet must be a standalone fact. Do not reason step by step, "
             "do not answer the request, and do not guess. If you are not "
             "sure, output NONE.\n\nRequest:\n"
          << input_text;
      break;
  }
  return out.str();
}

SpecialistResponse invoke(const SpecialistRequest& request, Transport& transport) {
  const std::string instruction =
      render_instruction(request.kind, request.input_text, request.instruction_template_id);
  const auto start = std::chrono::steady_clock::now();
  std::string raw = transport.complete(instruction);
  const auto stop = std::chrono::steady_clock::now();

  SpecialistResponse response;
  response.raw_output = std::move(raw);
  response.latency_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  response.output_token_estimate = text::whitespace_token_count(response.raw_output);
  response.is_none =
      request.kind == AgentKind::kFactAdder && normalized_is_none(response.raw_output);
  if (response.is_none) {
    response.raw_output = "NONE";
  }
  return response;
}

SpecialistResponse mock_cleaner(std::string_view input, const data::Lexicons& lex) {
  std::vector<std::string> out_tokens;
  const auto tokens = text::split_ws(input);
  for (const auto& tok : tokens) {
    const std::string core = text::strip_surrounding_punct(tok);
    const std::string lowered = text::ascii_lower(core);
    const auto fix = lex.correction_for(lowered);
    if (!fix || core.empty()) {
      out_tokens.push_back(tok);
      continue;
    }
    std::string replacement = *fix;
    // keep a capitalized opener capitalized
    if (core[0] >= 'A' && core[0] <= 'Z' && !replacement.empty() && replacement[0] >= 'a' &&
        replacement[0] <= 'z') {
      replacement[0] = static_cast<char>(replacement[0] - 'a' + 'A');
    }
    // re-attach surrounding punctuation
    const auto core_pos = tok.find(core);
    const std::string prefix = tok.substr(0, core_pos);
    const std::string suffix = tok.substr(core_pos + core.size());
    out_tokens.push_back(prefix + replacement + suffix);
  }
  std::string cleaned = text::join(out_tokens, " ");

  // restore the question mark on wh-questions
  if (!out_tokens.empty()) {
    const std::string first = text::normalize_token(out_tokens.front());
    const auto first_word = text::split_ws(first);
    if (!first_word.empty() && wh_words().count(first_word.front())) {
      const std::string trimmed = text::trim(cleaned);
      if (!trimmed.empty() && trimmed.back() != '?' && trimmed.back() != '.' &&
          trimmed.back() != '!') {
        cleaned += "?";
      }
    }
  }

  SpecialistResponse r;
  r.raw_output = cleaned;
  r.output_token_estimate = text::whitespace_token_count(cleaned);
  return r;
}

SpecialistResponse mock_paraphraser(std::string_view input) {
  std::string out = text::join(text::split_ws(input), " ");
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') {
      c = static_cast<char>(c - 'a' + 'A');
      break;
    }
    if (c >= 'A' && c <= 'Z') break;
  }
  SpecialistResponse r;
  r.raw_output = out;
  r.output_token_estimate = text::whitespace_token_count(out);
  return r;
}

SpecialistResponse mock_fact_adder(std::string_view input, const data::Lexicons& lex) {
  // entity keys matched as consecutive normalized tokens, table order
  std::vector<std::string> norm;
  for (const auto& t : text::split_ws(input)) {
    const std::string n = text::normalize_token(t);
    if (!n.empty()) norm.push_back(n);
  }

  std::vector<std::string> bullets;
  for (const auto& [entity, fact] : lex.facts()) {
    if (bullets.size() >= 3) break;
    const auto key = text::split_ws(entity);
    if (key.empty() || key.size() > norm.size()) continue;
    bool found = false;
    for (std::size_t i = 0; i + key.size() <= norm.size() && !found; ++i) {
      bool all = true;
      for (std::size_t k = 0; k < key.size(); ++k) {
        if (norm[i + k] != key[k]) {
          all = false;
          break;
        }
      }
      found = all;
    }
    if (found) bullets.push_back("- " + fact);
  }

  SpecialistResponse r;
  if (bullets.empty()) {
    r.raw_output = "NONE";
    r.is_none = true;
  } else {
    r.raw_output = text::join(bullets, "\n");
  }
  r.output_token_estimate = text::whitespace_token_count(r.raw_output);
  return r;
}

SpecialistResponse run_mock(AgentKind kind, std::string_view input, const data::Lexicons& lex) {
  switch (kind) {
    case AgentKind::kCleaner: return mock_cleaner(input, lex);
    case AgentKind::kParaphraser: return mock_paraphraser(input);
    case AgentKind::kFactAdder: return mock_fact_adder(input, lex);
  }
  return mock_paraphraser(input);
}

}  // namespace poaas::agents
