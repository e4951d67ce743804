#include "poaas/heuristics.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "poaas/error.hpp"
#include "poaas/text.hpp"

namespace poaas::heuristics {

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

const std::unordered_set<std::string>& wh_words() {
  static const std::unordered_set<std::string> kWh = {"what", "why",   "how",
                                                      "when", "where", "who"};
  return kWh;
}

const std::unordered_set<std::string>& vague_pronouns() {
  static const std::unordered_set<std::string> kPron = {"it", "this", "that", "they", "them"};
  return kPron;
}

void require_nonempty(const TokenizedPrompt& p) {
  if (p.empty()) throw EmptyInputError("prompt has no tokens");
}

// Wh-question detection for the punctuation penalty. A misspelled opener
// ("wht ...") still marks a question once its lexicon correction is a
// wh-word, otherwise typo-laden questions would dodge the missing-"?" check.
bool starts_like_wh_question(const TokenizedPrompt& p, const data::Lexicons& lex) {
  if (p.normalized_tokens.empty()) return false;
  const std::string& first = p.normalized_tokens.front();
  if (wh_words().count(first)) return true;
  if (auto fix = lex.correction_for(first)) {
    auto words = text::split_ws(*fix);
    if (!words.empty() && wh_words().count(text::ascii_lower(words.front()))) return true;
  }
  return false;
}

bool ends_with_question_mark(const std::string& raw) {
  const std::string t = text::trim(raw);
  return !t.empty() && t.back() == '?';
}

}  // namespace

TokenizedPrompt TokenizedPrompt::from_text(std::string_view input) {
  TokenizedPrompt p;
  p.raw.assign(input);
  p.tokens = text::split_ws(input);
  p.normalized_tokens.reserve(p.tokens.size());
  for (const auto& t : p.tokens) {
    p.normalized_tokens.push_back(text::normalize_token(t));
  }
  p.char_count = text::char_count(p.raw);
  p.is_question_start =
      !p.normalized_tokens.empty() && wh_words().count(p.normalized_tokens.front()) > 0;
  return p;
}

double typo_score(const TokenizedPrompt& p, const data::Lexicons& lex) {
  require_nonempty(p);
  double penalty = 0.0;

  // Misspellings / character noise: each token counts at most once.
  int noise_matches = 0;
  for (const auto& t : p.normalized_tokens) {
    if (lex.is_noise_token(t)) ++noise_matches;
  }
  penalty += 0.04 * std::min(noise_matches, 8);

  // Missing question punctuation on a wh-question opener.
  if (starts_like_wh_question(p, lex) && !ends_with_question_mark(p.raw)) {
    penalty += 0.05;
  }

  // Case anomalies, only meaningful past 20 characters: near-uniform
  // uppercase, or near-uniform lowercase without a capitalized opener.
  if (p.char_count > 20) {
    const std::u32string u = text::decode_utf8(p.raw);
    std::size_t upper = 0;
    std::size_t alpha = 0;
    bool first_alpha_lower = false;
    bool saw_alpha = false;
    for (char32_t c : u) {
      if (!text::is_ascii_alpha(c)) continue;
      ++alpha;
      if (text::is_ascii_upper(c)) ++upper;
      if (!saw_alpha) {
        saw_alpha = true;
        first_alpha_lower = text::is_ascii_lower(c);
      }
    }
    if (alpha > 0) {
      const double upper_ratio = static_cast<double>(upper) / static_cast<double>(alpha);
      const double lower_ratio = static_cast<double>(alpha - upper) / static_cast<double>(alpha);
      if (upper_ratio >= 0.90 || (lower_ratio >= 0.90 && first_alpha_lower)) {
        penalty += 0.05;
      }
    }
  }

  // Short-word ratio over non-stopword tokens.
  std::size_t content = 0;
  std::size_t short_content = 0;
  for (const auto& t : p.normalized_tokens) {
    if (t.empty() || lex.is_stopword(t)) continue;
    ++content;
    if (text::char_count(t) <= 2) ++short_content;
  }
  if (content > 0 &&
      static_cast<double>(short_content) / static_cast<double>(content) > 0.35) {
    penalty += 0.08;
  }

  return clip01(penalty);
}

double completeness_score(const TokenizedPrompt& p, const data::Lexicons& lex) {
  require_nonempty(p);
  const std::size_t n = p.tokens.size();
  double penalty = 0.0;

  if (n < 5) {
    penalty += 0.25;
  } else if (n < 10) {
    penalty += 0.15;
  }

  bool has_detail_cue = false;
  bool has_constraint_cue = false;
  for (const auto& t : p.normalized_tokens) {
    if (lex.is_detail_cue(t)) has_detail_cue = true;
    if (lex.is_constraint_cue(t)) has_constraint_cue = true;
  }
  if (n < 15 && !has_detail_cue) {
    penalty += 0.10;
  }

  // Vague template ("what is X" / "tell me about X") with no constraint cue.
  const auto& nt = p.normalized_tokens;
  const bool what_is = nt.size() >= 2 && nt[0] == "what" && nt[1] == "is";
  const bool tell_me_about =
      nt.size() >= 3 && nt[0] == "tell" && nt[1] == "me" && nt[2] == "about";
  if ((what_is || tell_me_about) && !has_constraint_cue) {
    penalty += 0.10;
  }

  return clip01(1.0 - penalty);
}

double fluency_score(const TokenizedPrompt& p) {
  require_nonempty(p);
  const std::size_t n = p.tokens.size();
  double penalty = 0.0;

  if (n < 3) {
    penalty += 0.25;
  }

  // Degenerate repetition: some exact bigram occurs at least twice.
  std::map<std::pair<std::string, std::string>, int> bigrams;
  bool repeated = false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (++bigrams[{p.tokens[i], p.tokens[i + 1]}] >= 2) {
      repeated = true;
      break;
    }
  }
  if (repeated) {
    penalty += 0.15;
  }

  if (n >= 12) {
    const std::string& first = p.tokens.front();
    const bool first_lower = !first.empty() && text::is_ascii_lower(static_cast<char32_t>(
                                                   static_cast<unsigned char>(first[0])));
    const bool has_sentence_punct = p.raw.find_first_of(".!?") != std::string::npos;
    if (first_lower && has_sentence_punct) {
      penalty += 0.10;
    }
  }

  return clip01(1.0 - penalty);
}

double clarity_score(const TokenizedPrompt& p) {
  require_nonempty(p);
  const std::size_t n = p.tokens.size();
  double penalty = 0.0;

  if (n >= 12) {
    std::unordered_set<std::string> types(p.normalized_tokens.begin(),
                                          p.normalized_tokens.end());
    const double ttr = static_cast<double>(types.size()) / static_cast<double>(n);
    if (ttr < 0.35) {
      penalty += 0.15;
    }
  }

  if (!p.normalized_tokens.empty() && vague_pronouns().count(p.normalized_tokens.front())) {
    penalty += 0.10;
  }

  if (n > 200) {
    penalty += 0.08;
  }

  return clip01(1.0 - penalty);
}

QualityProfile analyze(const TokenizedPrompt& p, const RoutingThresholds& t,
                       const data::Lexicons& lex) {
  require_nonempty(p);
  QualityProfile profile;
  profile.typo = typo_score(p, lex);
  profile.comp = completeness_score(p, lex);
  profile.flu = fluency_score(p);
  profile.clar = clarity_score(p);
  const double worst =
      std::max({profile.typo, std::max(0.0, t.tau_comp - profile.comp),
                std::max(0.0, t.tau_flu - profile.flu),
                std::max(0.0, t.tau_clar_fixed - profile.clar)});
  profile.q = clip01(1.0 - worst);
  return profile;
}

bool should_skip(const QualityProfile& profile, const RoutingThresholds& t) {
  return profile.q > 1.0 - t.tau_skip && profile.typo < t.typo_skip_max;
}

}  // namespace poaas::heuristics
