#include "corpusmine/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "corpusmine/ingest.hpp"

namespace corpusmine {

namespace {

void append_cp(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t to_lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x179 || cp == 0x17B || cp == 0x17D) return cp + 1;
  return cp;
}

void sort_entries(std::vector<TranslationLexicon::Entry>& list) {
  std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

}  // namespace

std::string lowercase_utf8(const std::string& word) {
  std::string out;
  out.reserve(word.size());
  for (char32_t cp : decode_utf8(word)) append_cp(out, to_lower_cp(cp));
  return out;
}

void TranslationLexicon::add(const std::string& src, const std::string& tgt,
                             double prob) {
  auto& list = entries_[src];
  for (const auto& e : list)
    if (e.first == tgt)
      throw std::runtime_error("duplicate lexicon entry: " + src + " -> " + tgt);
  list.emplace_back(tgt, prob);
}

void TranslationLexicon::finalize(double prune_floor) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    auto& list = it->second;
    double mass = 0.0;
    for (const auto& e : list) mass += e.second;
    if (mass > 1.0 + 1e-6) {
      for (auto& e : list) e.second /= mass;
      ++renormalized_;
    }
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](const Entry& e) { return e.second < prune_floor; }),
               list.end());
    if (list.empty()) {
      it = entries_.erase(it);
      continue;
    }
    sort_entries(list);
    ++it;
  }
  reverse_.clear();
  for (const auto& [src, list] : entries_)
    for (const auto& [tgt, p] : list) reverse_[tgt].emplace_back(src, p);
  for (auto& [tgt, list] : reverse_) sort_entries(list);
}

const std::vector<TranslationLexicon::Entry>*
TranslationLexicon::find_with_case_fallback(
    const std::unordered_map<std::string, std::vector<Entry>>& table,
    const std::string& word) const {
  auto it = table.find(word);
  if (it != table.end()) return &it->second;
  std::string lower = lowercase_utf8(word);
  if (lower != word) {
    it = table.find(lower);
    if (it != table.end()) return &it->second;
  }
  return nullptr;
}

const std::vector<TranslationLexicon::Entry>& TranslationLexicon::lookup(
    const std::string& src_word) const {
  static const std::vector<Entry> empty;
  const auto* list = find_with_case_fallback(entries_, src_word);
  return list ? *list : empty;
}

const std::vector<TranslationLexicon::Entry>& TranslationLexicon::reverse_lookup(
    const std::string& tgt_word) const {
  static const std::vector<Entry> empty;
  const auto* list = find_with_case_fallback(reverse_, tgt_word);
  return list ? *list : empty;
}

std::string TranslationLexicon::best_translation(const std::string& src_word) const {
  const auto& list = lookup(src_word);
  return list.empty() ? std::string() : list.front().first;
}

void TranslationLexicon::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write lexicon: " + path);
  std::vector<std::string> keys;
  keys.reserve(entries_.size());
  for (const auto& [src, _] : entries_) keys.push_back(src);
  std::sort(keys.begin(), keys.end());
  out.precision(12);
  for (const auto& src : keys)
    for (const auto& [tgt, p] : entries_.at(src))
      out << src << '\t' << tgt << '\t' << p << '\n';
}

TranslationLexicon load_lexicon_stream(std::istream& in, double prune_floor,
                                       const std::string& name) {
  TranslationLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = (t1 == std::string::npos) ? std::string::npos
                                               : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": expected `src TAB tgt TAB prob`");
    std::string prob_str = line.substr(t2 + 1);
    double prob;
    std::size_t used = 0;
    try {
      prob = std::stod(prob_str, &used);
    } catch (...) {
      used = 0;
    }
    if (used == 0 || used != prob_str.size() || !(prob > 0.0) || prob > 1.0)
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": bad probability `" + prob_str + "`");
    lex.add(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), prob);
  }
  lex.finalize(prune_floor);
  return lex;
}

TranslationLexicon load_lexicon(const std::string& path, double prune_floor) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  return load_lexicon_stream(in, prune_floor, path);
}

}  // namespace corpusmine
