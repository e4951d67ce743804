#include "poaas/data.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "poaas/error.hpp"
#include "poaas/text.hpp"

#ifndef POAAS_DEFAULT_DATA_DIR
#define POAAS_DEFAULT_DATA_DIR "data"
#endif

namespace poaas::data {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open data file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(content);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line = text::trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// QWERTY neighbors, letters only.
const std::unordered_map<char, std::string>& qwerty_neighbors() {
  static const std::unordered_map<char, std::string> k = {
      {'q', "wa"},     {'w', "qase"},   {'e', "wsdr"},  {'r', "edft"},  {'t', "rfgy"},
      {'y', "tghu"},   {'u', "yhji"},   {'i', "ujko"},  {'o', "iklp"},  {'p', "ol"},
      {'a', "qwsz"},   {'s', "awedxz"}, {'d', "serfcx"},{'f', "drtgvc"},{'g', "ftyhbv"},
      {'h', "gyujnb"}, {'j', "huikmn"}, {'k', "jiolm"}, {'l', "kop"},   {'z', "asx"},
      {'x', "zsdc"},   {'c', "xdfv"},   {'v', "cfgb"},  {'b', "vghn"},  {'n', "bhjm"},
      {'m', "njk"}};
  return k;
}

bool has_repeated_letter_run(const std::string& token) {
  int run = 1;
  for (std::size_t i = 1; i < token.size(); ++i) {
    char a = token[i - 1];
    char b = token[i];
    bool alpha = (a >= 'a' && a <= 'z') && (b >= 'a' && b <= 'z');
    if (alpha && a == b) {
      if (++run >= 3) return true;
    } else {
      run = 1;
    }
  }
  return false;
}

}  // namespace

Lexicons Lexicons::load(const std::string& dir) {
  Lexicons lex;
  lex.dir_ = dir;
  namespace fs = std::filesystem;

  const auto load_file = [&](const std::string& name) {
    std::string content = read_file((fs::path(dir) / name).string());
    lex.digests_[name] = text::fnv1a64_hex(content);
    return content;
  };

  for (const auto& line : read_lines(load_file("noise_lexicon.tsv"))) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError("noise_lexicon.tsv: missing tab in line: " + line);
    }
    NoiseEntry e{text::trim(line.substr(0, tab)), text::trim(line.substr(tab + 1))};
    if (e.wrong.empty() || e.right.empty()) {
      throw ConfigError("noise_lexicon.tsv: empty field in line: " + line);
    }
    lex.correction_map_[e.wrong] = e.right;
    for (const auto& word : text::split_ws(e.right)) {
      lex.correction_targets_.insert(text::ascii_lower(word));
    }
    lex.noise_.push_back(std::move(e));
  }

  for (const auto& w : read_lines(load_file("stopwords.txt"))) {
    lex.stopwords_.insert(text::ascii_lower(w));
  }
  for (const auto& w : read_lines(load_file("detail_cues.txt"))) {
    lex.detail_cues_.insert(text::ascii_lower(w));
  }
  for (const auto& w : read_lines(load_file("constraint_cues.txt"))) {
    lex.constraint_cues_.insert(text::ascii_lower(w));
  }
  for (const auto& p : read_lines(load_file("meta_phrases.txt"))) {
    lex.meta_phrases_.push_back(text::ascii_lower(p));
  }
  for (const auto& p : read_lines(load_file("answer_leak_phrases.txt"))) {
    lex.leak_phrases_.push_back(text::ascii_lower(p));
  }
  for (const auto& line : read_lines(load_file("fact_table.tsv"))) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError("fact_table.tsv: missing tab in line: " + line);
    }
    lex.facts_.emplace_back(text::ascii_lower(text::trim(line.substr(0, tab))),
                            text::trim(line.substr(tab + 1)));
  }
  for (const auto& w : read_lines(load_file("mixup_vocab.txt"))) {
    lex.mixup_vocab_.push_back(w);
  }
  if (lex.mixup_vocab_.empty()) {
    throw ConfigError("mixup_vocab.txt is empty");
  }

  // Generated noise variants: vowel-dropped and adjacent-key forms of the
  // lexicon corrections. Generation is deliberately conservative; a variant
  // that collides with any known-good word (stopwords, cues, correction
  // targets, the mixup vocabulary, fact-table words) is discarded so ordinary
  // prompts do not trip the typo detector. Short corrections are skipped
  // because their one-edit neighborhoods are dense with real words.
  std::unordered_set<std::string> known_good;
  const auto mark_good = [&](const std::string& w) {
    known_good.insert(text::ascii_lower(w));
  };
  for (const auto& w : lex.stopwords_) known_good.insert(w);
  for (const auto& w : lex.detail_cues_) known_good.insert(w);
  for (const auto& w : lex.constraint_cues_) known_good.insert(w);
  for (const auto& w : lex.correction_targets_) known_good.insert(w);
  for (const auto& w : lex.mixup_vocab_) mark_good(w);
  for (const auto& [entity, fact] : lex.facts_) {
    for (const auto& tok : text::split_ws(fact)) known_good.insert(text::normalize_token(tok));
    for (const auto& tok : text::split_ws(entity)) known_good.insert(text::normalize_token(tok));
  }

  const auto safe_insert = [&](const std::string& v) {
    if (v.size() < 3) return;
    if (known_good.count(v)) return;
    lex.noise_variants_.insert(v);
  };
  const auto& adj = qwerty_neighbors();
  for (const auto& e : lex.noise_) {
    for (const auto& raw : text::split_ws(e.right)) {
      const std::string word = text::ascii_lower(raw);
      if (word.size() >= 4) {
        // drop one vowel at a time
        for (std::size_t i = 0; i < word.size(); ++i) {
          if (is_vowel(word[i])) {
            safe_insert(word.substr(0, i) + word.substr(i + 1));
          }
        }
      }
      if (word.size() >= 5) {
        // substitute one letter with a QWERTY neighbor
        for (std::size_t i = 0; i < word.size(); ++i) {
          auto it = adj.find(word[i]);
          if (it == adj.end()) continue;
          for (char n : it->second) {
            std::string v = word;
            v[i] = n;
            safe_insert(v);
          }
        }
      }
    }
  }

  return lex;
}

bool Lexicons::is_noise_token(const std::string& normalized_token) const {
  if (normalized_token.empty()) return false;
  if (correction_map_.count(normalized_token)) return true;
  if (noise_variants_.count(normalized_token)) return true;
  return has_repeated_letter_run(normalized_token);
}

std::optional<std::string> Lexicons::correction_for(const std::string& normalized_token) const {
  auto it = correction_map_.find(normalized_token);
  if (it == correction_map_.end()) return std::nullopt;
  return it->second;
}

std::string resolve_data_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("POAAS_DATA_DIR"); env && *env) return env;
  return POAAS_DEFAULT_DATA_DIR;
}

}  // namespace poaas::data
