#include "poaas/drift.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <unordered_map>

#include "poaas/error.hpp"
#include "poaas/text.hpp"

namespace poaas::drift {

namespace {

// difflib-equivalent longest-block matcher over Unicode scalars, junk and
// autojunk disabled. Tie-breaking matches difflib: among maximal blocks the
// one with the smallest start in a wins, then the smallest start in b.
class SequenceMatcher32 {
 public:
  SequenceMatcher32(std::u32string a, std::u32string b) : a_(std::move(a)), b_(std::move(b)) {
    for (std::size_t j = 0; j < b_.size(); ++j) {
      b2j_[b_[j]].push_back(j);
    }
  }

  double ratio() {
    const std::size_t len = a_.size() + b_.size();
    if (len == 0) return 1.0;
    return 2.0 * static_cast<double>(total_matched()) / static_cast<double>(len);
  }

 private:
  struct Match {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t size = 0;
  };

  Match find_longest(std::size_t alo, std::size_t ahi, std::size_t blo, std::size_t bhi) const {
    Match best{alo, blo, 0};
    std::unordered_map<std::size_t, std::size_t> j2len;
    for (std::size_t i = alo; i < ahi; ++i) {
      std::unordered_map<std::size_t, std::size_t> newj2len;
      auto it = b2j_.find(a_[i]);
      if (it != b2j_.end()) {
        for (std::size_t j : it->second) {
          if (j < blo) continue;
          if (j >= bhi) break;
          std::size_t k = 1;
          if (j > 0) {
            auto p = j2len.find(j - 1);
            if (p != j2len.end()) k = p->second + 1;
          }
          newj2len[j] = k;
          if (k > best.size) {
            best = {i + 1 - k, j + 1 - k, k};
          }
        }
      }
      j2len = std::move(newj2len);
    }
    return best;
  }

  std::size_t total_matched() const {
    std::size_t total = 0;
    std::vector<std::array<std::size_t, 4>> stack{{0, a_.size(), 0, b_.size()}};
    while (!stack.empty()) {
      auto [alo, ahi, blo, bhi] = stack.back();
      stack.pop_back();
      if (alo >= ahi || blo >= bhi) continue;
      Match m = find_longest(alo, ahi, blo, bhi);
      if (m.size == 0) continue;
      total += m.size;
      stack.push_back({alo, m.a, blo, m.b});
      stack.push_back({m.a + m.size, ahi, m.b + m.size, bhi});
    }
    return total;
  }

  std::u32string a_;
  std::u32string b_;
  std::unordered_map<char32_t, std::vector<std::size_t>> b2j_;
};

std::set<std::u32string> char_ngrams(std::string_view s, std::size_t n) {
  std::set<std::u32string> grams;
  const std::u32string u = text::decode_utf8(text::normalize_ws_lower(s));
  if (u.size() >= n) {
    for (std::size_t i = 0; i + n <= u.size(); ++i) {
      grams.insert(u.substr(i, n));
    }
  }
  return grams;
}

std::set<std::vector<std::string>> word_ngrams(std::string_view s, std::size_t n) {
  std::set<std::vector<std::string>> grams;
  const auto words = text::split_ws(text::normalize_ws_lower(s));
  if (words.size() >= n) {
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      grams.insert(std::vector<std::string>(words.begin() + static_cast<long>(i),
                                            words.begin() + static_cast<long>(i + n)));
    }
  }
  return grams;
}

template <typename Set>
double jaccard(const Set& a, const Set& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& g : a) {
    if (b.count(g)) ++inter;
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

bool is_url_or_email(const std::string& lower_tok) {
  if (lower_tok.rfind("http://", 0) == 0 || lower_tok.rfind("https://", 0) == 0 ||
      lower_tok.rfind("www.", 0) == 0) {
    return true;
  }
  const auto at = lower_tok.find('@');
  if (at == std::string::npos || at == 0 || at + 1 >= lower_tok.size()) return false;
  const auto dot = lower_tok.find('.', at + 2);
  return dot != std::string::npos && dot + 1 < lower_tok.size();
}

// Tokens shaped like "Word": one uppercase letter then lowercase letters.
bool is_capitalized_word(const std::string& tok) {
  if (tok.size() < 2) return false;
  if (!(tok[0] >= 'A' && tok[0] <= 'Z')) return false;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (!(tok[i] >= 'a' && tok[i] <= 'z')) return false;
  }
  return true;
}

// Spans between matching double quotes (straight or curly), non-nested,
// scanned left to right.
std::vector<std::string> quoted_spans(std::string_view s) {
  std::vector<std::string> spans;
  const std::u32string u = text::decode_utf8(s);
  std::size_t i = 0;
  while (i < u.size()) {
    char32_t open = u[i];
    char32_t close = 0;
    if (open == U'"') {
      close = U'"';
    } else if (open == char32_t{0x201C}) {  // left curly double quote
      close = char32_t{0x201D};
    } else {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < u.size() && u[j] != close) ++j;
    if (j >= u.size()) break;  // unmatched opener
    std::u32string inner = u.substr(i + 1, j - i - 1);
    std::string span = text::trim(text::encode_utf8(inner));
    if (!span.empty()) spans.push_back(std::move(span));
    i = j + 1;
  }
  return spans;
}

// Number of non-overlapping occurrences of needle in haystack.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

template <typename Counter>
std::size_t count_preserved(const std::vector<std::string>& items, Counter&& available_count) {
  // Multiset semantics: an item from x counts as preserved up to the number
  // of times it occurs in x2.
  std::map<std::string, std::size_t> wanted;
  for (const auto& item : items) ++wanted[item];
  std::size_t preserved = 0;
  for (const auto& [item, mult] : wanted) {
    preserved += std::min(mult, available_count(item));
  }
  return preserved;
}

}  // namespace

double seq_ratio(std::string_view a, std::string_view b) {
  SequenceMatcher32 sm(text::decode_utf8(text::normalize_ws_lower(a)),
                       text::decode_utf8(text::normalize_ws_lower(b)));
  return sm.ratio();
}

double char_ngram_jaccard(std::string_view a, std::string_view b, std::size_t n) {
  return jaccard(char_ngrams(a, n), char_ngrams(b, n));
}

double word_ngram_jaccard(std::string_view a, std::string_view b, std::size_t n) {
  return jaccard(word_ngrams(a, n), word_ngrams(b, n));
}

double weighted_token_overlap(std::string_view a, std::string_view b,
                              const data::Lexicons& lex) {
  std::set<std::string> ta;
  std::set<std::string> tb;
  for (const auto& t : text::split_ws(a)) {
    const std::string n = text::normalize_token(t);
    if (!n.empty()) ta.insert(n);
  }
  for (const auto& t : text::split_ws(b)) {
    const std::string n = text::normalize_token(t);
    if (!n.empty()) tb.insert(n);
  }
  if (ta.empty() && tb.empty()) return 1.0;
  const auto weight = [&](const std::string& t) { return lex.is_stopword(t) ? 0.2 : 1.0; };
  double inter = 0.0;
  double uni = 0.0;
  for (const auto& t : ta) {
    uni += weight(t);
    if (tb.count(t)) inter += weight(t);
  }
  for (const auto& t : tb) {
    if (!ta.count(t)) uni += weight(t);
  }
  return uni == 0.0 ? 1.0 : inter / uni;
}

DriftReport similarity(std::string_view a, std::string_view b, const data::Lexicons& lex) {
  DriftReport r;
  r.s_seq = seq_ratio(a, b);
  r.s_jac = 0.6 * char_ngram_jaccard(a, b, 3) + 0.4 * word_ngram_jaccard(a, b, 2);
  r.s_tok = weighted_token_overlap(a, b, lex);
  r.sim = 0.5 * r.s_seq + 0.3 * r.s_jac + 0.2 * r.s_tok;
  r.d = 1.0 - r.sim;
  r.d_final = r.d;
  return r;
}

KeyItems extract_key_items(std::string_view x) {
  KeyItems items;
  const auto tokens = text::split_ws(x);
  for (const auto& tok : tokens) {
    const std::string stripped = text::strip_surrounding_punct(tok);
    if (stripped.empty()) continue;
    if (text::is_number_literal(stripped)) {
      items.numbers.push_back(stripped);
      continue;
    }
    const std::string lower = text::ascii_lower(stripped);
    if (is_url_or_email(lower)) {
      items.urls_emails.push_back(lower);
    }
  }
  items.quoted = quoted_spans(x);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (is_capitalized_word(tokens[i]) && is_capitalized_word(tokens[i + 1])) {
      items.entities.push_back(tokens[i] + " " + tokens[i + 1]);
    }
  }
  return items;
}

double preservation_ratio(std::string_view x, std::string_view x2) {
  const KeyItems items = extract_key_items(x);
  const std::size_t m = items.total();
  if (m == 0) return 1.0;

  // Token views of x2 for number and entity membership.
  const auto tokens2 = text::split_ws(x2);
  std::map<std::string, std::size_t> stripped_counts;
  for (const auto& t : tokens2) {
    const std::string s = text::strip_surrounding_punct(t);
    if (!s.empty()) ++stripped_counts[s];
  }
  std::map<std::string, std::size_t> pair_counts;
  for (std::size_t i = 0; i + 1 < tokens2.size(); ++i) {
    ++pair_counts[text::strip_surrounding_punct(tokens2[i]) + " " +
                  text::strip_surrounding_punct(tokens2[i + 1])];
  }
  const std::string lower2 = text::ascii_lower(x2);

  std::size_t c = 0;
  c += count_preserved(items.numbers, [&](const std::string& v) {
    auto it = stripped_counts.find(v);
    return it == stripped_counts.end() ? std::size_t{0} : it->second;
  });
  c += count_preserved(items.entities, [&](const std::string& v) {
    auto it = pair_counts.find(v);
    return it == pair_counts.end() ? std::size_t{0} : it->second;
  });
  c += count_preserved(items.urls_emails,
                       [&](const std::string& v) { return count_occurrences(lower2, v); });
  c += count_preserved(items.quoted,
                       [&](const std::string& v) { return count_occurrences(x2, v); });

  return static_cast<double>(c) / static_cast<double>(m);
}

DriftReport compute_drift(std::string_view x, std::string_view x2, const DriftPolicy& policy,
                          const data::Lexicons& lex) {
  const std::size_t len_x = text::char_count(x);
  if (len_x == 0) throw EmptyInputError("drift: original text is empty");
  DriftReport r = similarity(x, x2, lex);
  r.p_content = preservation_ratio(x, x2);
  if (r.p_content >= policy.preservation_floor) {
    r.d_final = r.d;
  } else {
    r.d_final = std::min(1.0, r.d + policy.penalty_weight * (1.0 - r.p_content));
  }
  r.rho = static_cast<double>(text::char_count(x2)) / static_cast<double>(len_x);
  return r;
}

std::string_view to_string(DriftReason reason) {
  switch (reason) {
    case DriftReason::kOk: return "OK";
    case DriftReason::kDriftExceeded: return "DRIFT_EXCEEDED";
    case DriftReason::kGlobalCap: return "GLOBAL_CAP";
    case DriftReason::kLengthRatio: return "LENGTH_RATIO_EXCEEDED";
    case DriftReason::kOverLength: return "OVER_LENGTH";
  }
  return "OK";
}

double cleaner_cap(const DriftPolicy& policy, double typo) {
  return std::min(0.40, policy.delta_clean_base + 0.5 * typo);
}

DriftVerdict within_drift(std::string_view x, std::string_view x2, agents::AgentKind agent,
                          const heuristics::QualityProfile& profile, const DriftPolicy& policy,
                          const data::Lexicons& lex) {
  DriftVerdict v;
  v.report = compute_drift(x, x2, policy, lex);

  if (agent == agents::AgentKind::kFactAdder) {
    // Additive context: content checks belong to the fact guard and the merge
    // budget, but the length-ratio cap still holds.
    if (v.report.rho > policy.rho_max) {
      v.reason = DriftReason::kLengthRatio;
      return v;
    }
    v.accepted = true;
    return v;
  }

  // The per-agent cap governs acceptance. delta_max is the clean-regime
  // fail-safe: it reports the dominant failure whenever drift lands beyond
  // it, but it does not undercut the Cleaner's typo-relaxed cap, which may
  // legitimately exceed it on heavily degraded prompts.
  double cap = policy.delta_max;
  if (agent == agents::AgentKind::kCleaner) {
    cap = cleaner_cap(policy, profile.typo);
  } else if (agent == agents::AgentKind::kParaphraser) {
    cap = profile.clar < 0.70 ? policy.delta_para_relaxed : policy.delta_para;
  }
  if (v.report.d_final > cap) {
    v.reason = v.report.d_final > policy.delta_max ? DriftReason::kGlobalCap
                                                   : DriftReason::kDriftExceeded;
    return v;
  }

  if (v.report.rho > policy.rho_max) {
    v.reason = DriftReason::kLengthRatio;
    return v;
  }
  if (text::char_count(x2) > 2 * text::char_count(x)) {
    v.reason = DriftReason::kOverLength;
    return v;
  }

  v.accepted = true;
  return v;
}

}  // namespace poaas::drift
