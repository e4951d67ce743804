#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace poaas::data {

struct NoiseEntry {
  std::string wrong;
  std::string right;
};

// All shipped lexicons, loaded once at startup. Immutable afterwards, so a
// single instance can be shared across threads.
class Lexicons {
 public:
  // Loads every data file from `dir`. Throws ConfigError on missing or
  // malformed files.
  static Lexicons load(const std::string& dir);

  const std::vector<NoiseEntry>& noise_entries() const { return noise_; }

  bool is_stopword(const std::string& token) const { return stopwords_.count(token) > 0; }
  bool is_detail_cue(const std::string& token) const { return detail_cues_.count(token) > 0; }
  bool is_constraint_cue(const std::string& token) const {
    return constraint_cues_.count(token) > 0;
  }

  // True when the normalized token looks like character noise: a lexicon
  // misspelling, a generated vowel-dropped or adjacent-key variant of a
  // lexicon correction, or a letter repeated three or more times. Each token
  // counts at most once toward the typo penalty.
  bool is_noise_token(const std::string& normalized_token) const;

  // Correction for a lexicon misspelling, if any.
  std::optional<std::string> correction_for(const std::string& normalized_token) const;

  // True when `token` is the correction target of some lexicon entry. Used by
  // the cleaner guard's new-content closure.
  bool is_correction_target(const std::string& normalized_token) const {
    return correction_targets_.count(normalized_token) > 0;
  }

  const std::vector<std::string>& meta_phrases() const { return meta_phrases_; }
  const std::vector<std::string>& leak_phrases() const { return leak_phrases_; }

  // entity key (lowercased, possibly multi-word) -> fact sentence, file order.
  const std::vector<std::pair<std::string, std::string>>& facts() const { return facts_; }

  const std::vector<std::string>& mixup_vocab() const { return mixup_vocab_; }

  const std::string& dir() const { return dir_; }

  // filename -> fnv1a64 hex digest of the file bytes; folded into the
  // configuration hash so runs are traceable to exact data-file contents.
  const std::map<std::string, std::string>& file_digests() const { return digests_; }

 private:
  std::vector<NoiseEntry> noise_;
  std::unordered_map<std::string, std::string> correction_map_;
  std::unordered_set<std::string> correction_targets_;
  std::unordered_set<std::string> noise_variants_;
  std::unordered_set<std::string> stopwords_;
  std::unordered_set<std::string> detail_cues_;
  std::unordered_set<std::string> constraint_cues_;
  std::vector<std::string> meta_phrases_;
  std::vector<std::string> leak_phrases_;
  std::vector<std::pair<std::string, std::string>> facts_;
  std::vector<std::string> mixup_vocab_;
  std::map<std::string, std::string> digests_;
  std::string dir_;
};

// Resolution order for the data directory: explicit argument, POAAS_DATA_DIR
// environment variable, then the compiled-in source-tree default.
std::string resolve_data_dir(const std::string& explicit_dir = "");

}  // namespace poaas::data
