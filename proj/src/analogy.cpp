#include "corpusmine/analogy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace corpusmine {

std::pair<SymbolCodedSentence, SymbolCodedSentence> symbol_code(
    const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::unordered_map<std::string, int> vocab;
  auto code = [&](const std::vector<std::string>& tokens) {
    SymbolCodedSentence s;
    s.codes.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto [it, _] = vocab.emplace(t, static_cast<int>(vocab.size()));
      s.codes.push_back(it->second);
    }
    return s;
  };
  auto ca = code(a);
  auto cb = code(b);
  return {std::move(ca), std::move(cb)};
}

int word_levenshtein(const SymbolCodedSentence& a, const SymbolCodedSentence& b) {
  const auto& x = a.codes;
  const auto& y = b.codes;
  std::vector<int> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= y.size(); ++j) {
      int sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

int word_distance(const std::vector<std::string>& a,
                  const std::vector<std::string>& b) {
  auto [ca, cb] = symbol_code(a, b);
  return word_levenshtein(ca, cb);
}

bool char_profile_holds(const SentenceRecord& a, const SentenceRecord& b,
                        const SentenceRecord& c, const SentenceRecord& d) {
  std::set<char32_t> alphabet;
  for (const auto* rec : {&a, &b, &c, &d})
    for (const auto& [ch, _] : rec->char_counts) alphabet.insert(ch);
  auto get = [](const SentenceRecord& r, char32_t ch) {
    auto it = r.char_counts.find(ch);
    return it == r.char_counts.end() ? 0 : it->second;
  };
  for (char32_t ch : alphabet)
    if (get(a, ch) - get(b, ch) != get(c, ch) - get(d, ch)) return false;
  return true;
}

namespace {

struct DistTable {
  // pairwise word-level distances for one corpus side
  std::vector<int> d;
  std::size_t n = 0;
  int at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
};

DistTable pairwise_distances(const std::vector<SentenceRecord>& sents) {
  DistTable t;
  t.n = sents.size();
  t.d.assign(t.n * t.n, 0);
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = i + 1; j < t.n; ++j) {
      int dist = word_distance(sents[i].tokens, sents[j].tokens);
      t.d[i * t.n + j] = dist;
      t.d[j * t.n + i] = dist;
    }
  return t;
}

}  // namespace

std::vector<AnalogyQuadruple> detect_analogies(const ParallelSeed& seed) {
  const std::size_t n = seed.src.size();
  if (n < 4 || seed.tgt.size() != n) return {};

  DistTable ds = pairwise_distances(seed.src);
  DistTable dt = pairwise_distances(seed.tgt);

  // group ordered (A,B) pairs by source-side distance; dist(A,B)=dist(C,D)
  // then only pairs within one group can form a quadruple, which prunes
  // the O(n^4) scan without losing candidates
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> by_dist;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) by_dist[ds.at(i, j)].emplace_back(i, j);

  std::vector<AnalogyQuadruple> out;
  for (const auto& [dist, pairs] : by_dist) {
    for (const auto& [a, b] : pairs) {
      for (const auto& [c, d] : pairs) {
        if (c == a || c == b || d == a || d == b) continue;
        if (ds.at(a, c) != ds.at(b, d)) continue;
        if (dt.at(a, b) != dt.at(c, d)) continue;
        if (dt.at(a, c) != dt.at(b, d)) continue;
        if (!char_profile_holds(seed.src[a], seed.src[b], seed.src[c], seed.src[d]))
          continue;
        if (!char_profile_holds(seed.tgt[a], seed.tgt[b], seed.tgt[c], seed.tgt[d]))
          continue;
        out.push_back({a, b, c, d});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b, x.c, x.d) < std::tie(y.a, y.b, y.c, y.d);
  });
  return out;
}

std::vector<AnalogyCluster> cluster_analogies(
    const std::vector<AnalogyQuadruple>& quadruples, const ParallelSeed& seed,
    int chain_depth) {
  (void)seed;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<AnalogyCluster> out;
  for (const auto& q : quadruples) {
    std::size_t m1 = std::min(q.a, q.c), m2 = std::max(q.a, q.c);
    if (!seen.emplace(m1, m2).second) continue;
    out.push_back({m1, m2, {}});
  }
  if (chain_depth > 0) {
    // E:F chain search: C:D::E:F and E:F::A:B among detected quadruples
    std::set<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> qset;
    for (const auto& q : quadruples) qset.insert({q.a, q.b, q.c, q.d});
    for (auto& cluster : out) {
      for (const auto& q : quadruples) {
        if (q.a != cluster.member1) continue;
        // q = A:B::C:D with A = member1; any E:F with C:D::E:F and E:F::A:B
        for (const auto& r : quadruples) {
          if (r.a != q.c || r.b != q.d) continue;  // r = C:D::E:F
          if (!qset.count({r.c, r.d, q.a, q.b})) continue;  // E:F::A:B
          cluster.extensions.push_back(r.c);
          cluster.extensions.push_back(r.d);
        }
      }
      std::sort(cluster.extensions.begin(), cluster.extensions.end());
      cluster.extensions.erase(
          std::unique(cluster.extensions.begin(), cluster.extensions.end()),
          cluster.extensions.end());
    }
  }
  return out;
}

namespace {

std::vector<std::string> common_prefix(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) break;
    out.push_back(a[i]);
  }
  return out;
}

std::vector<std::string> common_suffix(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::size_t limit = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (a[a.size() - 1 - i] != b[b.size() - 1 - i]) break;
    out.push_back(a[a.size() - 1 - i]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

struct SideTemplate {
  std::vector<std::string> prefix, suffix;
  std::vector<std::string> middle1, middle2;
};

SideTemplate side_template(const std::vector<std::string>& s1,
                           const std::vector<std::string>& s2) {
  SideTemplate t;
  t.prefix = common_prefix(s1, s2);
  std::vector<std::string> r1(s1.begin() + t.prefix.size(), s1.end());
  std::vector<std::string> r2(s2.begin() + t.prefix.size(), s2.end());
  t.suffix = common_suffix(r1, r2);
  t.middle1.assign(r1.begin(), r1.end() - t.suffix.size());
  t.middle2.assign(r2.begin(), r2.end() - t.suffix.size());
  return t;
}

bool match_template(const std::vector<std::string>& prefix,
                    const std::vector<std::string>& suffix,
                    const std::vector<std::string>& tokens,
                    std::vector<std::string>* middle) {
  if (tokens.size() < prefix.size() + suffix.size() + 1) return false;
  if (!std::equal(prefix.begin(), prefix.end(), tokens.begin())) return false;
  if (!std::equal(suffix.rbegin(), suffix.rend(), tokens.rbegin())) return false;
  middle->assign(tokens.begin() + prefix.size(), tokens.end() - suffix.size());
  return true;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

}  // namespace

std::optional<RewritingModel> extract_rewriting_model(
    const AnalogyCluster& cluster, const ParallelSeed& seed,
    std::size_t cluster_id) {
  const auto& s1 = seed.src[cluster.member1].tokens;
  const auto& s2 = seed.src[cluster.member2].tokens;
  const auto& t1 = seed.tgt[cluster.member1].tokens;
  const auto& t2 = seed.tgt[cluster.member2].tokens;

  SideTemplate src_side = side_template(s1, s2);
  SideTemplate tgt_side = side_template(t1, t2);

  if (src_side.prefix.empty() && src_side.suffix.empty()) return std::nullopt;
  if (src_side.middle1.empty() && src_side.middle2.empty()) return std::nullopt;
  if (tgt_side.middle1.empty() && tgt_side.middle2.empty()) return std::nullopt;

  RewritingModel model;
  model.src_prefix = std::move(src_side.prefix);
  model.src_suffix = std::move(src_side.suffix);
  model.tgt_prefix = std::move(tgt_side.prefix);
  model.tgt_suffix = std::move(tgt_side.suffix);
  model.cluster_id = cluster_id;
  return model;
}

ApplyResult apply_rewriting_model(const RewritingModel& model,
                                  const std::vector<std::string>& src_tokens,
                                  const TranslationLexicon& lexicon,
                                  std::size_t model_id) {
  ApplyResult result;
  std::vector<std::string> middle;
  if (!match_template(model.src_prefix, model.src_suffix, src_tokens, &middle))
    return result;

  GeneratedPair pair;
  pair.src_tokens = src_tokens;
  pair.model_id = model_id;
  std::vector<std::string> tgt = model.tgt_prefix;
  bool unknown_seen = false;
  for (const auto& word : middle) {
    const auto& translations = lexicon.lookup(word);
    if (translations.empty()) {
      tgt.push_back("unknown");
      unknown_seen = true;
      continue;
    }
    tgt.push_back(translations.front().first);
    pair.substitutions.push_back(
        {word, translations.front().first, translations.front().second});
  }
  tgt.insert(tgt.end(), model.tgt_suffix.begin(), model.tgt_suffix.end());

  if (unknown_seen) {
    result.status = ApplyStatus::Withheld;
    result.review_tokens = std::move(tgt);
    return result;
  }
  pair.tgt_tokens = std::move(tgt);
  result.status = ApplyStatus::Generated;
  result.pair = std::move(pair);
  return result;
}

std::optional<GeneratedPair> validate_pair_with_model(
    const RewritingModel& model, const std::vector<std::string>& src_tokens,
    const std::vector<std::string>& tgt_tokens,
    const TranslationLexicon& lexicon, std::size_t model_id) {
  std::vector<std::string> src_middle, tgt_middle;
  if (!match_template(model.src_prefix, model.src_suffix, src_tokens, &src_middle))
    return std::nullopt;
  if (!match_template(model.tgt_prefix, model.tgt_suffix, tgt_tokens, &tgt_middle))
    return std::nullopt;

  GeneratedPair pair;
  pair.src_tokens = src_tokens;
  pair.tgt_tokens = tgt_tokens;
  pair.model_id = model_id;
  for (const auto& word : src_middle) {
    bool matched = false;
    for (const auto& [tr, p] : lexicon.lookup(word)) {
      if (std::find(tgt_middle.begin(), tgt_middle.end(), tr) != tgt_middle.end()) {
        pair.substitutions.push_back({word, tr, p});
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  return pair;
}

void save_rewriting_models(const std::vector<RewritingModel>& models,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model store: " + path);
  for (const auto& m : models)
    out << join(m.src_prefix) << '\t' << join(m.src_suffix) << '\t'
        << join(m.tgt_prefix) << '\t' << join(m.tgt_suffix) << '\t'
        << m.cluster_id << '\n';
}

std::vector<RewritingModel> load_rewriting_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model store: " + path);
  std::vector<RewritingModel> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5)
      throw std::runtime_error("model store line with " +
                               std::to_string(fields.size()) + " fields: " + line);
    RewritingModel m;
    m.src_prefix = split_ws(fields[0]);
    m.src_suffix = split_ws(fields[1]);
    m.tgt_prefix = split_ws(fields[2]);
    m.tgt_suffix = split_ws(fields[3]);
    m.cluster_id = std::stoull(fields[4]);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace corpusmine
