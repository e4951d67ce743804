#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace poaas::merger {

// Fact-block budget. `counter` names the pluggable token counter; the default
// build ships "whitespace" only.
struct TokenBudget {
  std::size_t fact_token_cap = 120;
  std::size_t fact_bullet_cap = 3;
  std::string counter = "whitespace";
};

// Counts tokens under the named counter. Throws ConfigError for unknown ids.
std::size_t count_tokens(std::string_view s, const std::string& counter_id);

}  // namespace poaas::merger
