// Acceptance suite: one PASS/FAIL line per criterion.  Exit 0 when all
// runnable criteria pass, 77 when the multi-core timing criterion cannot
// run on the current hardware (everything else passing), 1 otherwise.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "corpusmine/aligner.hpp"
#include "corpusmine/analogy.hpp"
#include "corpusmine/classifier.hpp"
#include "corpusmine/config.hpp"
#include "corpusmine/evalmetrics.hpp"
#include "corpusmine/filterlm.hpp"
#include "corpusmine/ingest.hpp"
#include "corpusmine/lexicon.hpp"
#include "corpusmine/pipeline.hpp"

using namespace corpusmine;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
bool g_timing_skipped = false;

void report(int criterion, bool ok, const std::string& what,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

std::vector<std::string> toks(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------- 1

double best_path_brute(const SimilarityMatrix& sim, double g, std::size_t i,
                       std::size_t j) {
  if (i == sim.rows() && j == sim.cols()) return 0.0;
  double best = -1e300;
  if (i < sim.rows() && j < sim.cols())
    best = std::max(best, sim(i, j) + best_path_brute(sim, g, i + 1, j + 1));
  if (i < sim.rows()) best = std::max(best, g + best_path_brute(sim, g, i + 1, j));
  if (j < sim.cols()) best = std::max(best, g + best_path_brute(sim, g, i, j + 1));
  return best;
}

void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    std::size_t n = 1 + rng() % 6, m = 1 + rng() % 6;
    SimilarityMatrix sim(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) sim(i, j) = dist(rng);
    for (double g : {-0.1, -0.3, -0.5}) {
      double dp = nw_align(sim, g).total_score;
      double brute = best_path_brute(sim, g, 0, 0);
      if (std::fabs(dp - brute) > 1e-9) ok = false;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start).count();
  report(1, ok && secs < 10.0,
         "global alignment matches exhaustive path enumeration on 1000 "
         "random matrices",
         "runtime " + std::to_string(secs) + "s");
}

// ---------------------------------------------------------------- 2, 8

struct ToyWorld {
  TranslationLexicon lexicon;
  MaxMarginModel model;
};

std::vector<std::string> toy_src_sentence(std::mt19937_64& rng, int len) {
  std::vector<std::string> s;
  for (int k = 0; k < len; ++k) s.push_back("w" + std::to_string(rng() % 100));
  return s;
}

std::vector<std::string> toy_translate(const std::vector<std::string>& src) {
  std::vector<std::string> t;
  for (const auto& w : src) t.push_back("v" + w.substr(1));
  return t;
}

std::vector<std::string> toy_noise(std::mt19937_64& rng, int len,
                                   const char* prefix) {
  std::vector<std::string> s;
  for (int k = 0; k < len; ++k)
    s.push_back(prefix + std::to_string(rng() % 100));
  return s;
}

ToyWorld build_toy_world(std::mt19937_64& rng) {
  ToyWorld world;
  world.lexicon = TranslationLexicon("s", "t");
  for (int i = 0; i < 100; ++i)
    world.lexicon.add("w" + std::to_string(i), "v" + std::to_string(i), 0.9);
  world.lexicon.finalize();

  // disjoint 200-pair seed for classifier training
  std::vector<SentencePair> seed;
  for (int i = 0; i < 200; ++i) {
    auto src = toy_src_sentence(rng, 4 + static_cast<int>(rng() % 5));
    seed.push_back({src, toy_translate(src)});
  }
  TrainingSet ts = generate_training_set(seed, 3, 7);
  std::vector<FeatureVector> pos, neg;
  for (const auto& p : ts.positives)
    pos.push_back(extract_features(p.src, p.tgt, world.lexicon));
  for (const auto& p : ts.negatives)
    neg.push_back(extract_features(p.src, p.tgt, world.lexicon));
  world.model = train_classifier(pos, neg).model;
  return world;
}

// n_docs document pairs; planted translation pairs recorded in `planted`
std::vector<DocPairSentences> build_collection(
    std::mt19937_64& rng, const std::vector<std::string>* /*unused*/, int n_docs,
    int sentences_per_side, int planted_per_doc,
    std::set<std::string>* planted) {
  std::vector<DocPairSentences> docs;
  for (int d = 0; d < n_docs; ++d) {
    DocPairSentences dp;
    dp.id = "doc" + std::to_string(d);
    std::vector<std::string> src_lines, tgt_lines;
    for (int s = 0; s < sentences_per_side; ++s) {
      src_lines.push_back(detokenize(toy_noise(rng, 4 + rng() % 4, "n")));
      tgt_lines.push_back(detokenize(toy_noise(rng, 4 + rng() % 4, "m")));
    }
    // plant translations at order-preserving positions on both sides
    std::set<int> slots;
    while (static_cast<int>(slots.size()) < planted_per_doc)
      slots.insert(static_cast<int>(rng() % sentences_per_side));
    for (int slot : slots) {
      auto src = toy_src_sentence(rng, 4 + static_cast<int>(rng() % 5));
      src_lines[slot] = detokenize(src);
      tgt_lines[slot] = detokenize(toy_translate(src));
      if (planted) planted->insert(src_lines[slot] + "\t" + tgt_lines[slot]);
    }
    for (const auto& l : src_lines) dp.src.push_back(make_sentence_record(l));
    for (const auto& l : tgt_lines) dp.tgt.push_back(make_sentence_record(l));
    docs.push_back(std::move(dp));
  }
  return docs;
}

void criterion_2() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2002);
  ToyWorld world = build_toy_world(rng);
  std::set<std::string> planted;
  // 25 document pairs x 10 sentences per side = 500, 2 planted each = 50
  auto docs = build_collection(rng, nullptr, 25, 10, 2, &planted);
  MiningOptions opts;
  opts.tau = 0.5;
  MiningResult result = mine_collection(docs, world.model, world.lexicon, opts);
  std::size_t hits = 0;
  for (const auto& p : result.pairs)
    if (planted.count(p.src + "\t" + p.tgt)) ++hits;
  double precision = result.pairs.empty()
                         ? 0.0
                         : static_cast<double>(hits) / result.pairs.size();
  double recall = static_cast<double>(hits) / planted.size();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start).count();
  report(2, precision >= 0.9 && recall >= 0.7 && secs < 60.0,
         "planted-pair mining benchmark at tau=0.5",
         "precision " + std::to_string(precision) + ", recall " +
             std::to_string(recall) + ", runtime " + std::to_string(secs) + "s");
}

void criterion_8() {
  std::mt19937_64 rng(8008);
  ToyWorld world = build_toy_world(rng);
  auto docs = build_collection(rng, nullptr, 200, 12, 2, nullptr);

  MiningOptions one;
  one.workers = 1;
  MiningOptions four;
  four.workers = 4;
  auto r1 = mine_collection(docs, world.model, world.lexicon, one);
  auto r4 = mine_collection(docs, world.model, world.lexicon, four);
  bool identical = r1.pairs.size() == r4.pairs.size();
  for (std::size_t i = 0; identical && i < r1.pairs.size(); ++i)
    identical = r1.pairs[i].src == r4.pairs[i].src &&
                r1.pairs[i].tgt == r4.pairs[i].tgt &&
                r1.pairs[i].score == r4.pairs[i].score &&
                r1.pairs[i].doc_pair_id == r4.pairs[i].doc_pair_id;

  unsigned cores = std::thread::hardware_concurrency();
  if (cores < 4) {
    report(8, identical,
           "worker-count invariance holds; speedup measurement skipped",
           "only " + std::to_string(cores) +
               " hardware thread(s) available, 4 needed for the timing half");
    g_timing_skipped = true;
    return;
  }
  auto time_run = [&](const MiningOptions& o) {
    auto t0 = std::chrono::steady_clock::now();
    mine_collection(docs, world.model, world.lexicon, o);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  double t1 = time_run(one), t4 = time_run(four);
  report(8, identical && t1 >= 2.0 * t4,
         "4-worker mining at least 2x faster with identical output",
         "t1 " + std::to_string(t1) + "s, t4 " + std::to_string(t4) + "s");
}

// ---------------------------------------------------------------- 3

void criterion_3() {
  fs::path dir = fs::temp_directory_path() / "corpusmine_acceptance_c3";
  fs::remove_all(dir);
  fs::create_directories(dir / "docs" / "pl");
  fs::create_directories(dir / "docs" / "en");

  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
  };
  write(dir / "seed.src",
        "Poproszę koc .\nDziękuję za koc .\nPoproszę poduszkę .\n"
        "Dziękuję za poduszkę .\n");
  write(dir / "seed.tgt",
        "A blanket , please .\nThank you for the blanket .\n"
        "A pillow , please .\nThank you for the pillow .\n");
  write(dir / "lexicon.tsv", "bilet\tticket\t0.9\n");
  write(dir / "lexicon_empty.tsv", "");
  write(dir / "doc_pairs.tsv",
        "doc_id_src\tdoc_id_tgt\tlink_source\tsrc_title\ttgt_title\n"
        "pl_000001\ten_000001\tmanual\tProśba\tRequest\n");
  write(dir / "docs" / "pl" / "pl_000001.txt", "Poproszę bilet.");
  write(dir / "docs" / "en" / "en_000001.txt", "Nothing relevant here.");

  PipelineConfig cfg;
  cfg.seed_src = (dir / "seed.src").string();
  cfg.seed_tgt = (dir / "seed.tgt").string();
  cfg.lexicon_path = (dir / "lexicon.tsv").string();
  cfg.output_dir = dir.string();
  run_analogy(cfg);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool exact = slurp(dir / "quasi.src.txt") == "Poproszę bilet .\n" &&
               slurp(dir / "quasi.tgt.txt") == "A ticket , please .\n";

  // same run with an empty lexicon: the pair is withheld to review
  fs::path dir2 = fs::temp_directory_path() / "corpusmine_acceptance_c3b";
  fs::remove_all(dir2);
  fs::create_directories(dir2);
  fs::copy(dir, dir2, fs::copy_options::recursive);
  PipelineConfig cfg2 = cfg;
  cfg2.lexicon_path = (dir2 / "lexicon_empty.tsv").string();
  cfg2.output_dir = dir2.string();
  run_analogy(cfg2);
  std::string review = slurp(dir2 / "quasi_review.txt");
  bool withheld = review.find("A unknown , please .") != std::string::npos &&
                  slurp(dir2 / "quasi.src.txt").empty();

  report(3, exact && withheld,
         "two-member cluster pipeline emits \"Poproszę bilet .\" <-> "
         "\"A ticket , please .\" and routes the empty-lexicon case to review");
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

// ---------------------------------------------------------------- 4, 5

ParallelSeed random_parallel_seed(std::size_t n, std::mt19937_64& rng) {
  const std::vector<std::string> vs = {"ala", "ma", "kota", "psa", "dom",
                                       "pije", "mleko", "."};
  const std::vector<std::string> vt = {"anna", "has", "cat", "dog", "home",
                                       "drinks", "milk", "."};
  ParallelSeed seed;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s, t;
    std::size_t len = 2 + rng() % 3;
    for (std::size_t k = 0; k < len; ++k) {
      s += (k ? " " : "") + vs[rng() % vs.size()];
      t += (k ? " " : "") + vt[rng() % vt.size()];
    }
    seed.src.push_back(make_sentence_record(s));
    seed.tgt.push_back(make_sentence_record(t));
  }
  return seed;
}

std::vector<AnalogyQuadruple> detect_brute(const ParallelSeed& seed) {
  const std::size_t n = seed.src.size();
  std::vector<std::vector<int>> ds(n, std::vector<int>(n)),
      dt(n, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ds[i][j] = word_distance(seed.src[i].tokens, seed.src[j].tokens);
      dt[i][j] = word_distance(seed.tgt[i].tokens, seed.tgt[j].tokens);
    }
  std::vector<AnalogyQuadruple> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        for (std::size_t d = 0; d < n; ++d) {
          if (d == a || d == b || d == c) continue;
          if (ds[a][b] != ds[c][d] || ds[a][c] != ds[b][d]) continue;
          if (dt[a][b] != dt[c][d] || dt[a][c] != dt[b][d]) continue;
          if (!char_profile_holds(seed.src[a], seed.src[b], seed.src[c],
                                  seed.src[d]))
            continue;
          if (!char_profile_holds(seed.tgt[a], seed.tgt[b], seed.tgt[c],
                                  seed.tgt[d]))
            continue;
          out.push_back({a, b, c, d});
        }
      }
    }
  return out;
}

bool same_quads(std::vector<AnalogyQuadruple> x, std::vector<AnalogyQuadruple> y) {
  auto key = [](const AnalogyQuadruple& q) {
    return std::array<std::size_t, 4>{q.a, q.b, q.c, q.d};
  };
  auto lt = [&](const AnalogyQuadruple& p, const AnalogyQuadruple& q) {
    return key(p) < key(q);
  };
  std::sort(x.begin(), x.end(), lt);
  std::sort(y.begin(), y.end(), lt);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (key(x[i]) != key(y[i])) return false;
  return true;
}

void criterion_4() {
  std::mt19937_64 rng(4004);
  bool ok = true;
  std::vector<std::size_t> sizes;
  for (int i = 0; i < 46; ++i) sizes.push_back(4 + rng() % 37);
  sizes.insert(sizes.end(), {80, 120, 160, 200});
  for (std::size_t n : sizes) {
    auto seed = random_parallel_seed(n, rng);
    if (!same_quads(detect_analogies(seed), detect_brute(seed))) {
      ok = false;
      break;
    }
  }
  report(4, ok,
         "pruned analogy detection equals unpruned O(n^4) search on 50 "
         "random corpora");
}

void criterion_5() {
  std::mt19937_64 rng(5005);
  const std::vector<std::string> vocab = {"q", "r", "s", "t", "u"};
  auto random_sentence = [&]() {
    std::vector<std::string> s;
    std::size_t len = rng() % 7;
    for (std::size_t i = 0; i < len; ++i) s.push_back(vocab[rng() % vocab.size()]);
    return s;
  };
  bool axioms = true;
  for (int trial = 0; trial < 10000 && axioms; ++trial) {
    auto a = random_sentence(), b = random_sentence(), c = random_sentence();
    int ab = word_distance(a, b);
    axioms = ab >= 0 && ab == word_distance(b, a) && ((ab == 0) == (a == b)) &&
             ab <= word_distance(a, c) + word_distance(c, b);
  }

  auto random_string = [&]() {
    std::string s;
    std::size_t len = rng() % 8;
    for (std::size_t i = 0; i < len; ++i)
      s.push_back(static_cast<char>('a' + rng() % 4));
    return s;
  };
  auto count = [](const SentenceRecord& r, char32_t ch) {
    auto it = r.char_counts.find(ch);
    return it == r.char_counts.end() ? 0 : it->second;
  };
  bool profile = true;
  for (int trial = 0; trial < 10000 && profile; ++trial) {
    auto a = make_sentence_record(random_string());
    auto b = make_sentence_record(random_string());
    auto c = make_sentence_record(random_string());
    auto d = make_sentence_record(random_string());
    std::set<char32_t> alphabet;
    for (const auto* r : {&a, &b, &c, &d})
      for (const auto& [ch, _] : r->char_counts) alphabet.insert(ch);
    bool oracle = true;
    for (char32_t ch : alphabet)
      if (count(a, ch) - count(b, ch) != count(c, ch) - count(d, ch))
        oracle = false;
    profile = char_profile_holds(a, b, c, d) == oracle;
  }
  report(5, axioms && profile,
         "edit-distance metric axioms and character-profile oracle agreement "
         "on 10k random cases each");
}

// ---------------------------------------------------------------- 6

void criterion_6() {
  std::mt19937_64 rng(6006);
  // 10-word vocabularies sharing 3 words: 30% overlap
  std::vector<std::string> va, vb;
  for (int i = 0; i < 3; ++i) va.push_back("shared" + std::to_string(i));
  vb = va;
  for (int i = 0; i < 7; ++i) {
    va.push_back("alpha" + std::to_string(i));
    vb.push_back("beta" + std::to_string(i));
  }
  auto sample = [&](const std::vector<std::string>& vocab, std::size_t n) {
    std::vector<std::vector<std::string>> c;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> s;
      std::size_t len = 3 + rng() % 6;
      for (std::size_t k = 0; k < len; ++k)
        s.push_back(vocab[rng() % vocab.size()]);
      c.push_back(std::move(s));
    }
    return c;
  };
  auto lm_in = train_ngram_lm(sample(va, 500), 2, 0.1);
  auto lm_out = train_ngram_lm(sample(vb, 500), 2, 0.1);

  auto test_in = sample(va, 200);
  auto test_out = sample(vb, 200);
  std::vector<double> s_in, s_out;
  for (const auto& s : test_in)
    s_in.push_back(moore_lewis_score(lm_in, lm_out, s));
  for (const auto& s : test_out)
    s_out.push_back(moore_lewis_score(lm_in, lm_out, s));
  // lower score = more in-domain; AUC of that ranking
  double wins = 0.0;
  for (double a : s_in)
    for (double b : s_out) wins += (a < b) ? 1.0 : (a == b ? 0.5 : 0.0);
  double auc = wins / (s_in.size() * s_out.size());

  auto mix = interpolate_lms({&lm_in, &lm_out}, sample(va, 100));
  report(6, auc >= 0.9 && mix.weights[0] >= 0.9,
         "cross-entropy ranking separates 30%-overlap domains and EM "
         "interpolation favors the matching model",
         "AUC " + std::to_string(auc) + ", weight " +
             std::to_string(mix.weights[0]));
}

// ---------------------------------------------------------------- 7

void criterion_7() {
  std::mt19937_64 rng(7007);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  auto random_corpus = [&](std::size_t n) {
    std::vector<TokenSeq> c;
    for (std::size_t i = 0; i < n; ++i) {
      TokenSeq s;
      std::size_t len = 1 + rng() % 8;
      for (std::size_t k = 0; k < len; ++k)
        s.push_back(vocab[rng() % vocab.size()]);
      c.push_back(std::move(s));
    }
    return c;
  };

  auto ident = random_corpus(20);
  bool bleu_ok = std::fabs(bleu(ident, ident) - 1.0) < 1e-12;
  // clipped-count example: "the the the" vs "the cat" -> p1 = 1/3, p2 = 0
  std::vector<TokenSeq> hyp{toks("the the the")}, ref{toks("the cat")};
  bleu_ok = bleu_ok && std::fabs(bleu(hyp, ref, 1, false) - 1.0 / 3.0) < 1e-12 &&
            bleu(hyp, ref, 2, false) == 0.0;

  auto brute_edit = [](const TokenSeq& a, const TokenSeq& b) {
    std::vector<std::vector<int>> d(a.size() + 1,
                                    std::vector<int>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
      for (std::size_t j = 1; j <= b.size(); ++j)
        d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                            d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
  };
  bool ter_ok = true;
  for (int trial = 0; trial < 1000 && ter_ok; ++trial) {
    auto h = random_corpus(1)[0];
    auto r = random_corpus(1)[0];
    double expected =
        static_cast<double>(brute_edit(h, r)) / static_cast<double>(r.size());
    ter_ok = std::fabs(ter(h, r) - expected) < 1e-12;
  }

  CorpusMetric metric = [](const std::vector<TokenSeq>& h,
                           const std::vector<TokenSeq>& r) {
    return corpus_ter(h, r);
  };
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto h = random_corpus(25);
    auto r = random_corpus(25);
    double point = metric(h, r);
    auto [lo, hi] = bootstrap_ci(metric, h, r, 200, 7000 + trial);
    if (lo <= point && point <= hi) ++covered;
  }
  report(7, bleu_ok && ter_ok && covered == 100,
         "BLEU identity/clipping values, TER oracle agreement, bootstrap "
         "coverage on 100 corpora",
         "covered " + std::to_string(covered) + "/100");
}

// ---------------------------------------------------------------- 9

void criterion_9() {
  std::cout << "SKIP criterion 9: full-scale corpus statistics and "
               "translation-system scores are not reproducible at desk scale "
               "(they require complete encyclopedia/news dumps and an SMT "
               "stack); the property suites above stand in for them."
            << std::endl;
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  if (g_timing_skipped) {
    std::cout << "all runnable criteria passed; timing half of criterion 8 "
                 "skipped on this hardware"
              << std::endl;
    return 77;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
