#pragma once

#include <string>
#include <string_view>

namespace poaas::agents {

// The specialist roles. Merge precedence is Cleaner, then Paraphraser, then
// Fact-Adder bullets prepended.
enum class AgentKind { kCleaner, kParaphraser, kFactAdder };

inline constexpr AgentKind kAllAgentKinds[] = {AgentKind::kCleaner, AgentKind::kParaphraser,
                                               AgentKind::kFactAdder};

std::string_view to_string(AgentKind kind);

// Parses "cleaner" / "paraphraser" / "fact_adder"; throws ConfigError otherwise.
AgentKind agent_kind_from_string(std::string_view name);

}  // namespace poaas::agents
