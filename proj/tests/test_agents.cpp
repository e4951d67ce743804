#include <doctest.h>

#include "poaas/agents.hpp"
#include "poaas/error.hpp"
#include "test_util.hpp"

using namespace poaas;
using namespace poaas::agents;
using poaas_test::lexicons;

TEST_SUITE("agents") {

TEST_CASE("mock cleaner applies the correction map") {
  const auto& lex = *lexicons();
  CHECK(mock_cleaner("teh cat sat", lex).raw_output == "the cat sat");
  CHECK(mock_cleaner("wht is gravity", lex).raw_output == "what is gravity?");
  CHECK(mock_cleaner("Teh Report.", lex).raw_output == "The Report.");  // case preserved
  // already-clean text is untouched
  CHECK(mock_cleaner("What causes tides?", lex).raw_output == "What causes tides?");
}

TEST_CASE("mock paraphraser is conservative") {
  CHECK(mock_paraphraser("Explain photosynthesis.").raw_output == "Explain photosynthesis.");
  CHECK(mock_paraphraser("explain   photosynthesis.").raw_output == "Explain photosynthesis.");
}

TEST_CASE("mock fact adder looks up the shipped table") {
  const auto& lex = *lexicons();
  auto hit = mock_fact_adder("tell me about Paris", lex);
  CHECK_FALSE(hit.is_none);
  CHECK(hit.raw_output == "- Paris is the capital of France.");

  auto miss = mock_fact_adder("qwlkjqwe zzkjh", lex);
  CHECK(miss.is_none);
  CHECK(miss.raw_output == "NONE");

  // multi-word entity keys match consecutive tokens
  auto multi = mock_fact_adder("how does the water cycle work", lex);
  CHECK_FALSE(multi.is_none);
}

TEST_CASE("mocks are deterministic") {
  const auto& lex = *lexicons();
  poaas_test::TextGen gen(2024);
  for (int i = 0; i < 100; ++i) {
    const std::string s = gen.random_sentence(12);
    for (auto kind : kAllAgentKinds) {
      CHECK(run_mock(kind, s, lex).raw_output == run_mock(kind, s, lex).raw_output);
    }
  }
}

TEST_CASE("instruction templates") {
  const std::string input = "wht is gravity";
  const std::string cleaner = render_instruction(AgentKind::kCleaner, input);
  // the input appears verbatim exactly once
  auto first = cleaner.find(input);
  REQUIRE(first != std::string::npos);
  CHECK(cleaner.find(input, first + 1) == std::string::npos);

  const std::string facts = render_instruction(AgentKind::kFactAdder, input);
  CHECK(facts.find("3") != std::string::npos);
  CHECK(facts.find("120") != std::string::npos);
  CHECK(facts.find("NONE") != std::string::npos);

  CHECK_THROWS_AS((void)render_instruction(AgentKind::kCleaner, input, "v999"), ConfigError);
}

TEST_CASE("invoke wraps transport output and flags NONE") {
  struct FixedTransport : Transport {
    std::string reply;
    std::string complete(const std::string&) override { return reply; }
  };
  FixedTransport transport;
  transport.reply = "the cat sat";

  SpecialistRequest req;
  req.kind = AgentKind::kCleaner;
  req.input_text = "teh cat sat";
  auto resp = invoke(req, transport);
  CHECK(resp.raw_output == "the cat sat");
  CHECK(resp.output_token_estimate == 3);
  CHECK_FALSE(resp.is_none);

  transport.reply = "  none \n";
  req.kind = AgentKind::kFactAdder;
  auto none = invoke(req, transport);
  CHECK(none.is_none);
  CHECK(none.raw_output == "NONE");
}

TEST_CASE("unreachable endpoint raises a timeout-style error") {
  HttpTransportOptions options;
  options.url = "http://127.0.0.1:9/v1/completions";  // discard port, nothing listens
  options.timeout_ms = 500;
  auto transport = make_http_transport(options);
  CHECK_THROWS_AS((void)transport->complete("hello"), AgentTimeoutError);
}

TEST_CASE("agent kind round trip") {
  for (auto kind : kAllAgentKinds) {
    CHECK(agent_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS((void)agent_kind_from_string("unknown"), ConfigError);
}

}  // TEST_SUITE
