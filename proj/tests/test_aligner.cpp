#include "corpusmine/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

using namespace corpusmine;

namespace {

// exhaustive enumeration of monotone paths, independent of the DP
double best_path_score_brute(const SimilarityMatrix& sim, double g,
                             std::size_t i = 0, std::size_t j = 0) {
  const std::size_t n = sim.rows(), m = sim.cols();
  if (i == n && j == m) return 0.0;
  double best = -1e300;
  if (i < n && j < m)
    best = std::max(best, sim(i, j) + best_path_score_brute(sim, g, i + 1, j + 1));
  if (i < n)
    best = std::max(best, g + best_path_score_brute(sim, g, i + 1, j));
  if (j < m)
    best = std::max(best, g + best_path_score_brute(sim, g, i, j + 1));
  return best;
}

std::size_t count_paths(std::size_t n, std::size_t m, std::size_t i = 0,
                        std::size_t j = 0) {
  if (i == n && j == m) return 1;
  std::size_t c = 0;
  if (i < n && j < m) c += count_paths(n, m, i + 1, j + 1);
  if (i < n) c += count_paths(n, m, i + 1, j);
  if (j < m) c += count_paths(n, m, i, j + 1);
  return c;
}

SimilarityMatrix random_matrix(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(1e-6, 1.0 - 1e-6);
  SimilarityMatrix sim(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) sim(i, j) = dist(rng);
  return sim;
}

void check_path_invariants(const AlignmentPath& path, std::size_t n, std::size_t m) {
  std::vector<bool> src_seen(n, false), tgt_seen(m, false);
  long last_i = -1, last_j = -1;
  for (const auto& step : path.steps) {
    switch (step.kind) {
      case StepKind::Match:
        CHECK(static_cast<long>(step.i) > last_i);
        CHECK(static_cast<long>(step.j) > last_j);
        last_i = static_cast<long>(step.i);
        last_j = static_cast<long>(step.j);
        CHECK(!src_seen[step.i]);
        CHECK(!tgt_seen[step.j]);
        src_seen[step.i] = true;
        tgt_seen[step.j] = true;
        break;
      case StepKind::GapSrc:
        CHECK(!src_seen[step.i]);
        src_seen[step.i] = true;
        break;
      case StepKind::GapTgt:
        CHECK(!tgt_seen[step.j]);
        tgt_seen[step.j] = true;
        break;
    }
  }
  CHECK(std::all_of(src_seen.begin(), src_seen.end(), [](bool b) { return b; }));
  CHECK(std::all_of(tgt_seen.begin(), tgt_seen.end(), [](bool b) { return b; }));
}

TranslationLexicon identity_lexicon(const std::vector<SentenceRecord>& sents) {
  TranslationLexicon lex("x", "x");
  std::set<std::string> seen;
  for (const auto& s : sents)
    for (const auto& t : s.tokens)
      if (seen.insert(t).second) lex.add(t, t, 1.0);
  lex.finalize();
  return lex;
}

MaxMarginModel coverage_model() {
  // weight on coverage features, neutral calibration
  MaxMarginModel model;
  model.weights.assign(kNumFeatures, 0.0);
  model.weights[1] = 4.0;
  model.weights[2] = 4.0;
  model.weights[6] = -4.0;  // bias
  model.calib_slope = 1.0;
  return model;
}

}  // namespace

TEST_CASE("nw_align: diagonal 2x2 beats the 13-path alternatives") {
  CHECK(count_paths(2, 2) == 13);
  SimilarityMatrix sim(2, 2);
  sim(0, 0) = 0.9; sim(0, 1) = 0.1;
  sim(1, 0) = 0.1; sim(1, 1) = 0.9;
  auto path = nw_align(sim, -0.3);
  REQUIRE(path.steps.size() == 2);
  CHECK(path.steps[0].kind == StepKind::Match);
  CHECK(path.steps[0].i == 0);
  CHECK(path.steps[0].j == 0);
  CHECK(path.steps[1].kind == StepKind::Match);
  CHECK(path.steps[1].i == 1);
  CHECK(path.steps[1].j == 1);
  CHECK(path.total_score == doctest::Approx(1.8));
  CHECK(path.total_score == doctest::Approx(best_path_score_brute(sim, -0.3)));
}

TEST_CASE("nw_align: 1x1 match beats the double gap") {
  SimilarityMatrix sim(1, 1);
  sim(0, 0) = 0.9;
  auto path = nw_align(sim, -0.3);
  REQUIRE(path.steps.size() == 1);
  CHECK(path.steps[0].kind == StepKind::Match);
}

TEST_CASE("nw_align: 2x1 gap-then-match") {
  SimilarityMatrix sim(2, 1);
  sim(0, 0) = 0.1;
  sim(1, 0) = 0.9;
  auto path = nw_align(sim, -0.3);
  REQUIRE(path.steps.size() == 2);
  CHECK(path.steps[0].kind == StepKind::GapSrc);
  CHECK(path.steps[0].i == 0);
  CHECK(path.steps[1].kind == StepKind::Match);
  CHECK(path.steps[1].i == 1);
  CHECK(path.steps[1].j == 0);
  CHECK(path.total_score == doctest::Approx(0.6));
}

TEST_CASE("nw_align: rejects non-negative gap penalty") {
  SimilarityMatrix sim(1, 1);
  sim(0, 0) = 0.5;
  CHECK_THROWS_AS(nw_align(sim, 0.0), std::invalid_argument);
}

TEST_CASE("nw_align: equals brute-force enumeration on random matrices") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 5, m = 1 + rng() % 5;
    for (double g : {-0.1, -0.3, -0.5}) {
      auto sim = random_matrix(n, m, rng);
      auto path = nw_align(sim, g);
      CHECK(path.total_score ==
            doctest::Approx(best_path_score_brute(sim, g)).epsilon(1e-12));
      check_path_invariants(path, n, m);
    }
  }
}

TEST_CASE("nw_align: transposition swaps gap kinds at equal score") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 5, m = 1 + rng() % 5;
    auto sim = random_matrix(n, m, rng);
    auto fwd = nw_align(sim, -0.3);
    auto rev = nw_align(sim.transposed(), -0.3);
    CHECK(fwd.total_score == doctest::Approx(rev.total_score));
    std::size_t fwd_gap_src = 0, fwd_gap_tgt = 0, rev_gap_src = 0, rev_gap_tgt = 0;
    for (const auto& s : fwd.steps) {
      fwd_gap_src += s.kind == StepKind::GapSrc;
      fwd_gap_tgt += s.kind == StepKind::GapTgt;
    }
    for (const auto& s : rev.steps) {
      rev_gap_src += s.kind == StepKind::GapSrc;
      rev_gap_tgt += s.kind == StepKind::GapTgt;
    }
    CHECK(fwd_gap_src == rev_gap_tgt);
    CHECK(fwd_gap_tgt == rev_gap_src);
  }
}

TEST_CASE("build_similarity_matrix: single cell equals score_pair") {
  auto model = coverage_model();
  std::vector<SentenceRecord> src{make_sentence_record("kot pies")};
  std::vector<SentenceRecord> tgt{make_sentence_record("kot pies")};
  auto lex = identity_lexicon(src);
  auto sim = build_similarity_matrix(src, tgt, model, lex);
  REQUIRE(sim.rows() == 1);
  REQUIRE(sim.cols() == 1);
  auto f = extract_features(src[0].tokens, tgt[0].tokens, lex);
  CHECK(sim(0, 0) == score_pair(model, f));
}

TEST_CASE("build_similarity_matrix: diagonal dominates for identical documents") {
  auto model = coverage_model();
  std::vector<SentenceRecord> doc{make_sentence_record("ala ma kota"),
                                  make_sentence_record("kot pije mleko"),
                                  make_sentence_record("pies szczeka głośno")};
  auto lex = identity_lexicon(doc);
  auto sim = build_similarity_matrix(doc, doc, model, lex);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(sim(i, i) > sim(i, j));
}

TEST_CASE("build_similarity_matrix: errors on empty and oversize documents") {
  auto model = coverage_model();
  TranslationLexicon lex;
  std::vector<SentenceRecord> doc{make_sentence_record("a b")};
  CHECK_THROWS_AS(build_similarity_matrix({}, doc, model, lex),
                  std::invalid_argument);
  std::vector<SentenceRecord> big(5, make_sentence_record("a b"));
  CHECK_THROWS_WITH_AS(build_similarity_matrix(big, doc, model, lex, 4),
                       doctest::Contains("split"), std::invalid_argument);
}

TEST_CASE("build_similarity_matrix: deterministic across builds and threads") {
  auto model = coverage_model();
  std::vector<SentenceRecord> src, tgt;
  for (int i = 0; i < 6; ++i) {
    src.push_back(make_sentence_record("zdanie numer " + std::to_string(i)));
    tgt.push_back(make_sentence_record("zdanie numer " + std::to_string(5 - i)));
  }
  auto lex = identity_lexicon(src);
  auto a = build_similarity_matrix(src, tgt, model, lex);
  auto b = build_similarity_matrix(src, tgt, model, lex, 2000, 4);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) CHECK(a(i, j) == b(i, j));
}

TEST_CASE("extract_mined_pairs: threshold filter") {
  SimilarityMatrix sim(2, 2);
  sim(0, 0) = 0.9; sim(0, 1) = 0.1;
  sim(1, 0) = 0.1; sim(1, 1) = 0.2;
  std::vector<SentenceRecord> src{make_sentence_record("jeden"),
                                  make_sentence_record("dwa")};
  std::vector<SentenceRecord> tgt{make_sentence_record("one"),
                                  make_sentence_record("two")};
  AlignmentPath path;
  path.steps = {{StepKind::Match, 0, 0}, {StepKind::Match, 1, 1}};

  auto mined = extract_mined_pairs(path, sim, src, tgt, "d0", 0.5);
  REQUIRE(mined.size() == 1);
  CHECK(mined[0].src == "jeden");
  CHECK(mined[0].tgt == "one");
  CHECK(mined[0].score == doctest::Approx(0.9));

  CHECK(extract_mined_pairs(path, sim, src, tgt, "d0", 0.999).empty());
  CHECK(extract_mined_pairs(path, sim, src, tgt, "d0", 1e-9).size() == 2);
  CHECK_THROWS_AS(extract_mined_pairs(path, sim, src, tgt, "d0", 0.0),
                  std::invalid_argument);
}

TEST_CASE("mine_collection: empty input") {
  auto model = coverage_model();
  TranslationLexicon lex;
  auto result = mine_collection({}, model, lex);
  CHECK(result.pairs.empty());
  CHECK(result.report.rows.empty());
}

TEST_CASE("mine_collection: output independent of worker count") {
  auto model = coverage_model();
  std::vector<DocPairSentences> pairs;
  std::vector<SentenceRecord> all;
  for (int d = 0; d < 8; ++d) {
    DocPairSentences dp;
    dp.id = "doc" + std::to_string(d);
    for (int s = 0; s < 5; ++s) {
      dp.src.push_back(make_sentence_record("wspólne zdanie " +
                                            std::to_string(d * 10 + s)));
      dp.tgt.push_back(make_sentence_record("wspólne zdanie " +
                                            std::to_string(d * 10 + s)));
      all.push_back(dp.src.back());
    }
    pairs.push_back(std::move(dp));
  }
  auto lex = identity_lexicon(all);
  MiningOptions one;
  one.workers = 1;
  MiningOptions four;
  four.workers = 4;
  auto r1 = mine_collection(pairs, model, lex, one);
  auto r4 = mine_collection(pairs, model, lex, four);
  REQUIRE(r1.pairs.size() == r4.pairs.size());
  for (std::size_t i = 0; i < r1.pairs.size(); ++i) {
    CHECK(r1.pairs[i].src == r4.pairs[i].src);
    CHECK(r1.pairs[i].tgt == r4.pairs[i].tgt);
    CHECK(r1.pairs[i].doc_pair_id == r4.pairs[i].doc_pair_id);
    CHECK(r1.pairs[i].score == r4.pairs[i].score);
  }
  CHECK(r1.pairs.size() == 40);  // every planted sentence recovered
}

TEST_CASE("mine_collection: failing pair recorded and skipped") {
  auto model = coverage_model();
  TranslationLexicon lex;
  std::vector<DocPairSentences> pairs(2);
  pairs[0].id = "bad";  // empty documents fail the matrix build
  pairs[1].id = "good";
  pairs[1].src.push_back(make_sentence_record("a"));
  pairs[1].tgt.push_back(make_sentence_record("a"));
  auto result = mine_collection(pairs, model, lex);
  REQUIRE(result.report.rows.size() == 2);
  CHECK(result.report.rows[0].failed);
  CHECK(!result.report.rows[1].failed);
  CHECK(result.report.failed_doc_pairs == 1);
}
