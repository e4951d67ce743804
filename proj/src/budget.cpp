#include "poaas/budget.hpp"

#include "poaas/error.hpp"
#include "poaas/text.hpp"

namespace poaas::merger {

std::size_t count_tokens(std::string_view s, const std::string& counter_id) {
  if (counter_id == "whitespace") {
    return text::whitespace_token_count(s);
  }
  throw ConfigError("unknown token counter: " + counter_id);
}

}  // namespace poaas::merger
