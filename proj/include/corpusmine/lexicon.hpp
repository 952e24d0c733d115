#ifndef CORPUSMINE_LEXICON_HPP
#define CORPUSMINE_LEXICON_HPP

#include <istream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corpusmine {

// Probabilistic word-translation table (phrase-table 1-grams).
// Immutable after load; safe for concurrent readers.
class TranslationLexicon {
 public:
  using Entry = std::pair<std::string, double>;  // (target word, prob)

  TranslationLexicon() = default;
  TranslationLexicon(std::string src_lang, std::string tgt_lang)
      : src_lang_(std::move(src_lang)), tgt_lang_(std::move(tgt_lang)) {}

  // Adds one (src, tgt, prob) entry.  Duplicate (src,tgt) pairs throw.
  void add(const std::string& src, const std::string& tgt, double prob);

  // Sorts entries, renormalizes any source whose mass exceeds 1+1e-6
  // (counted in renormalized()), drops entries below the prune floor.
  void finalize(double prune_floor = 1e-4);

  // Ranked translations, descending probability.  Exact-case match
  // preferred, lowercase fallback.  Unknown word -> empty list.
  const std::vector<Entry>& lookup(const std::string& src_word) const;

  // Reverse direction, built at finalize() time: which source words
  // translate to this target word.
  const std::vector<Entry>& reverse_lookup(const std::string& tgt_word) const;

  // Highest-probability translation, ties broken lexicographically.
  // Empty string when unknown.
  std::string best_translation(const std::string& src_word) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t renormalized() const { return renormalized_; }
  const std::string& src_lang() const { return src_lang_; }
  const std::string& tgt_lang() const { return tgt_lang_; }

  void save(const std::string& path) const;

 private:
  std::unordered_map<std::string, std::vector<Entry>> entries_;
  std::unordered_map<std::string, std::vector<Entry>> reverse_;
  std::string src_lang_, tgt_lang_;
  std::size_t renormalized_ = 0;

  const std::vector<Entry>* find_with_case_fallback(
      const std::unordered_map<std::string, std::vector<Entry>>& table,
      const std::string& word) const;
};

// Parses `src TAB tgt TAB prob` lines.  Non-numeric or out-of-range
// probability throws with the line number.  Empty file -> empty lexicon.
TranslationLexicon load_lexicon(const std::string& path,
                                double prune_floor = 1e-4);
TranslationLexicon load_lexicon_stream(std::istream& in,
                                       double prune_floor = 1e-4,
                                       const std::string& name = "<stream>");

std::string lowercase_utf8(const std::string& word);

}  // namespace corpusmine

#endif
