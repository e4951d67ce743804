#include "poaas/guards.hpp"

#include <algorithm>
#include <unordered_set>

#include "poaas/drift.hpp"
#include "poaas/error.hpp"
#include "poaas/text.hpp"

namespace poaas::guards {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Strips one markdown fence wrapping the whole text, fence language tag
// included.
std::string strip_fences(const std::string& s) {
  if (s.rfind("```", 0) != 0) return s;
  const auto first_nl = s.find('\n');
  if (first_nl == std::string::npos) return s;
  auto rest = s.substr(first_nl + 1);
  const auto closing = rest.rfind("```");
  if (closing == std::string::npos) return s;
  // nothing but whitespace may follow the closing fence
  for (std::size_t i = closing + 3; i < rest.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(rest[i]))) return s;
  }
  return rest.substr(0, closing);
}

std::string strip_meta_prefix(const std::string& s, const data::Lexicons& lex) {
  const std::string lower = text::ascii_lower(s);
  for (const auto& phrase : lex.meta_phrases()) {
    if (lower.size() < phrase.size()) continue;
    if (lower.rfind(phrase, 0) != 0) continue;
    // word boundary after the phrase
    if (lower.size() > phrase.size() && is_word_char(s[phrase.size()]) &&
        is_word_char(phrase.back())) {
      continue;
    }
    std::size_t pos = phrase.size();
    while (pos < s.size() && (s[pos] == ':' || s[pos] == ',' || s[pos] == '-' ||
                              std::isspace(static_cast<unsigned char>(s[pos])))) {
      ++pos;
    }
    return s.substr(pos);
  }
  return s;
}

std::string strip_enclosing_quotes(const std::string& s) {
  if (s.size() < 2) return s;
  if (s.front() == '"' && s.back() == '"' &&
      std::count(s.begin(), s.end(), '"') == 2) {
    return s.substr(1, s.size() - 2);
  }
  if (s.front() == '\'' && s.back() == '\'' &&
      std::count(s.begin(), s.end(), '\'') == 2) {
    return s.substr(1, s.size() - 2);
  }
  // curly double quotes
  const std::string open = "“";
  const std::string close = "”";
  if (s.size() > open.size() + close.size() && s.rfind(open, 0) == 0 &&
      s.compare(s.size() - close.size(), close.size(), close) == 0) {
    const std::string inner = s.substr(open.size(), s.size() - open.size() - close.size());
    if (inner.find(open) == std::string::npos && inner.find(close) == std::string::npos) {
      return inner;
    }
  }
  return s;
}

std::string strip_leading_list_marker(const std::string& s) {
  if (s.rfind("- ", 0) == 0 || s.rfind("* ", 0) == 0) return s.substr(2);
  if (s.rfind("• ", 0) == 0) return s.substr(4);  // bullet char + space
  std::size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i > 0 && i + 1 < s.size() && (s[i] == '.' || s[i] == ')') && s[i + 1] == ' ') {
    return s.substr(i + 2);
  }
  return s;
}

bool contains_step_marker(const std::string& lower) {
  std::size_t pos = 0;
  while ((pos = lower.find("step", pos)) != std::string::npos) {
    std::size_t i = pos + 4;
    while (i < lower.size() && lower[i] == ' ') ++i;
    if (i < lower.size() && lower[i] >= '0' && lower[i] <= '9') return true;
    pos += 4;
  }
  return false;
}

}  // namespace

std::string_view to_string(GuardReason reason) {
  switch (reason) {
    case GuardReason::kOk: return "OK";
    case GuardReason::kNewContent: return "NEW_CONTENT";
    case GuardReason::kDroppedConstraint: return "DROPPED_CONSTRAINT";
    case GuardReason::kLostQuestionMark: return "LOST_QUESTION_MARK";
    case GuardReason::kAnswerLeakage: return "ANSWER_LEAKAGE";
    case GuardReason::kReasoningMarker: return "REASONING_MARKER";
    case GuardReason::kMetaCommentaryOnly: return "META_COMMENTARY_ONLY";
    case GuardReason::kOverLength: return "OVER_LENGTH";
  }
  return "OK";
}

std::string sanitize(std::string_view candidate, const data::Lexicons& lex) {
  std::string cur = text::trim(candidate);
  // Run the stripping passes to a fixpoint so sanitize is idempotent even for
  // stacked artifacts (a quoted, fenced, meta-prefixed candidate).
  for (int iter = 0; iter < 16; ++iter) {
    std::string next = cur;
    next = strip_fences(next);
    next = text::trim(next);
    next = strip_meta_prefix(next, lex);
    next = text::trim(next);
    next = strip_enclosing_quotes(next);
    next = text::trim(next);
    next = strip_leading_list_marker(next);
    next = text::trim(next);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

GuardVerdict cleaner_guard(std::string_view original, std::string_view edited,
                           const data::Lexicons& lex) {
  std::unordered_set<std::string> original_tokens;
  for (const auto& t : text::split_ws(original)) {
    const std::string n = text::normalize_token(t);
    if (!n.empty()) original_tokens.insert(n);
  }

  // Correction targets reachable from tokens that actually occur in the
  // original; anything else counts as injected content.
  std::unordered_set<std::string> allowed_targets;
  for (const auto& e : lex.noise_entries()) {
    if (original_tokens.count(text::ascii_lower(e.wrong)) == 0) continue;
    for (const auto& w : text::split_ws(e.right)) {
      allowed_targets.insert(text::ascii_lower(w));
    }
  }

  for (const auto& t : text::split_ws(edited)) {
    const std::string n = text::normalize_token(t);
    if (n.empty() || lex.is_stopword(n)) continue;
    if (original_tokens.count(n)) continue;
    if (allowed_targets.count(n)) continue;
    bool near_original = false;
    for (const auto& o : original_tokens) {
      if (text::levenshtein(n, o) <= 2) {
        near_original = true;
        break;
      }
    }
    if (!near_original) {
      return GuardVerdict::fail(GuardReason::kNewContent);
    }
  }

  if (drift::preservation_ratio(original, edited) < 1.0) {
    return GuardVerdict::fail(GuardReason::kDroppedConstraint);
  }
  return GuardVerdict::ok();
}

GuardVerdict paraphrase_guard(std::string_view original, std::string_view edited,
                              const data::Lexicons& lex) {
  (void)lex;
  if (drift::preservation_ratio(original, edited) < 1.0) {
    return GuardVerdict::fail(GuardReason::kDroppedConstraint);
  }

  const drift::KeyItems orig = drift::extract_key_items(original);
  const drift::KeyItems edit = drift::extract_key_items(edited);
  const auto contains = [](const std::vector<std::string>& hay, const std::string& needle) {
    return std::find(hay.begin(), hay.end(), needle) != hay.end();
  };
  for (const auto& n : edit.numbers) {
    if (!contains(orig.numbers, n)) return GuardVerdict::fail(GuardReason::kNewContent);
  }
  for (const auto& u : edit.urls_emails) {
    if (!contains(orig.urls_emails, u)) return GuardVerdict::fail(GuardReason::kNewContent);
  }
  for (const auto& e : edit.entities) {
    if (!contains(orig.entities, e)) return GuardVerdict::fail(GuardReason::kNewContent);
  }

  const std::string o = text::trim(original);
  const std::string e = text::trim(edited);
  if (!o.empty() && o.back() == '?' && (e.empty() || e.back() != '?')) {
    return GuardVerdict::fail(GuardReason::kLostQuestionMark);
  }
  return GuardVerdict::ok();
}

FactFilterResult fact_guard(std::string_view original, const std::vector<std::string>& facts,
                            const merger::TokenBudget& budget, const data::Lexicons& lex) {
  (void)original;
  FactFilterResult result;
  GuardReason first_drop = GuardReason::kOk;
  const auto note_drop = [&](GuardReason r) {
    if (first_drop == GuardReason::kOk) first_drop = r;
  };

  std::vector<std::string> survivors;
  for (const auto& fact : facts) {
    const std::string bullet = text::trim(fact);
    if (bullet.empty()) continue;
    const std::string lower = text::ascii_lower(bullet);

    bool leaky = false;
    for (const auto& phrase : lex.leak_phrases()) {
      if (lower.find(phrase) != std::string::npos) {
        leaky = true;
        break;
      }
    }
    if (leaky) {
      note_drop(GuardReason::kAnswerLeakage);
      continue;
    }

    bool has_first = false;
    bool has_then = false;
    for (const auto& t : text::split_ws(lower)) {
      const std::string n = text::normalize_token(t);
      if (n == "first") has_first = true;
      if (n == "then") has_then = true;
    }
    if (contains_step_marker(lower) || (has_first && has_then)) {
      note_drop(GuardReason::kReasoningMarker);
      continue;
    }

    const auto tokens = text::split_ws(bullet);
    const std::string last = text::strip_surrounding_punct(tokens.back());
    const bool bare_letter =
        last.size() == 1 && ((last[0] >= 'A' && last[0] <= 'E') || (last[0] >= 'a' && last[0] <= 'e'));
    if (bare_letter || text::is_number_literal(last)) {
      note_drop(GuardReason::kAnswerLeakage);
      continue;
    }

    survivors.push_back(bullet);
  }

  if (survivors.size() > budget.fact_bullet_cap) {
    survivors.resize(budget.fact_bullet_cap);
  }

  std::vector<std::string> within_budget;
  std::size_t used = 0;
  for (auto& bullet : survivors) {
    const std::size_t cost = merger::count_tokens(bullet, budget.counter);
    if (used + cost > budget.fact_token_cap) break;
    used += cost;
    within_budget.push_back(std::move(bullet));
  }

  result.bullets = std::move(within_budget);
  if (result.bullets.empty()) {
    result.none = true;
    result.reason = first_drop;
  }
  return result;
}

std::vector<std::string> parse_fact_bullets(std::string_view raw, const data::Lexicons& lex) {
  std::vector<std::string> bullets;
  std::string body = strip_fences(text::trim(raw));
  if (text::ascii_lower(text::trim(body)) == "none") return bullets;

  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find('\n', start);
    std::string line =
        text::trim(end == std::string::npos ? body.substr(start) : body.substr(start, end - start));
    if (!line.empty()) {
      std::string stripped = text::trim(strip_leading_list_marker(line));
      if (!stripped.empty()) {
        const std::string lower = text::ascii_lower(stripped);
        bool meta = false;
        for (const auto& phrase : lex.meta_phrases()) {
          if (lower.rfind(phrase, 0) == 0) {
            meta = true;
            break;
          }
        }
        if (!meta) bullets.push_back(std::move(stripped));
      }
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return bullets;
}

namespace {

struct Marker {
  std::size_t pos = 0;
  std::size_t len = 0;
};

bool matches_at(std::string_view s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != word[i]) return false;
  }
  return true;
}

std::vector<Marker> question_markers(std::string_view s) {
  std::vector<Marker> markers;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i != 0 && s[i - 1] != '\n') continue;
    if (matches_at(s, i, "question:")) {
      markers.push_back({i, 9});
    } else if (matches_at(s, i, "q:")) {
      markers.push_back({i, 2});
    }
  }
  return markers;
}

// An exemplar block is answered when an answer marker inside it is followed
// by non-whitespace content.
bool block_answered(std::string_view block) {
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (i != 0) {
      const char prev = block[i - 1];
      if (!(prev == ' ' || prev == '\t' || prev == '\n' || prev == '\r')) continue;
    } else {
      continue;  // the block starts with its question marker
    }
    std::size_t after = 0;
    if (matches_at(block, i, "answer:")) {
      after = i + 7;
    } else if (matches_at(block, i, "a:")) {
      after = i + 2;
    } else {
      continue;
    }
    for (std::size_t j = after; j < block.size(); ++j) {
      if (!std::isspace(static_cast<unsigned char>(block[j]))) return true;
    }
  }
  return false;
}

}  // namespace

FewShotSegmentation detect_fewshot(std::string_view prompt) {
  FewShotSegmentation seg;
  seg.final_query.assign(prompt);

  const auto markers = question_markers(prompt);
  if (markers.size() < 2) return seg;

  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [start, end)
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const std::size_t start = markers[i].pos;
    const std::size_t end = (i + 1 < markers.size()) ? markers[i + 1].pos : prompt.size();
    blocks.emplace_back(start, end);
  }

  std::size_t answered = 0;
  std::ptrdiff_t last_answered = -1;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (block_answered(prompt.substr(blocks[i].first, blocks[i].second - blocks[i].first))) {
      ++answered;
      last_answered = static_cast<std::ptrdiff_t>(i);
    }
  }

  if (answered < 2) return seg;
  const std::size_t next = static_cast<std::size_t>(last_answered + 1);
  if (next >= blocks.size()) return seg;  // no trailing query to edit

  const std::size_t split = blocks[next].first;
  seg.prefix.assign(prompt.substr(0, split));
  seg.final_query.assign(prompt.substr(split));
  seg.detected = true;
  return seg;
}

}  // namespace poaas::guards
