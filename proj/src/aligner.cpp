#include "corpusmine/aligner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace corpusmine {

SimilarityMatrix SimilarityMatrix::transposed() const {
  SimilarityMatrix t(m_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < m_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

SimilarityMatrix build_similarity_matrix(const std::vector<SentenceRecord>& src,
                                         const std::vector<SentenceRecord>& tgt,
                                         const MaxMarginModel& model,
                                         const TranslationLexicon& lexicon,
                                         std::size_t max_dim, unsigned threads) {
  if (src.empty() || tgt.empty())
    throw std::invalid_argument("build_similarity_matrix: empty document");
  if (src.size() > max_dim || tgt.size() > max_dim)
    throw std::invalid_argument(
        "build_similarity_matrix: document exceeds max dimension " +
        std::to_string(max_dim) + "; split the document and retry");

  SimilarityMatrix sim(src.size(), tgt.size());
  auto fill_rows = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < tgt.size(); ++j)
        sim(i, j) = score_pair(model,
                               extract_features(src[i].tokens, tgt[j].tokens, lexicon));
  };
  if (threads <= 1 || src.size() < 2) {
    fill_rows(0, src.size());
  } else {
    unsigned n_threads = std::min<unsigned>(threads, src.size());
    std::vector<std::thread> pool;
    std::size_t per = (src.size() + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      std::size_t lo = t * per;
      std::size_t hi = std::min(src.size(), lo + per);
      if (lo < hi) pool.emplace_back(fill_rows, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return sim;
}

AlignmentPath nw_align(const SimilarityMatrix& sim, double gap_penalty) {
  if (!(gap_penalty < 0.0))
    throw std::invalid_argument("nw_align: gap penalty must be negative");
  const std::size_t n = sim.rows(), m = sim.cols();
  std::vector<double> h((n + 1) * (m + 1), 0.0);
  std::vector<char> from((n + 1) * (m + 1), 0);  // 'd','u','l'
  auto H = [&](std::size_t i, std::size_t j) -> double& {
    return h[i * (m + 1) + j];
  };
  auto F = [&](std::size_t i, std::size_t j) -> char& {
    return from[i * (m + 1) + j];
  };
  for (std::size_t i = 1; i <= n; ++i) {
    H(i, 0) = static_cast<double>(i) * gap_penalty;
    F(i, 0) = 'u';
  }
  for (std::size_t j = 1; j <= m; ++j) {
    H(0, j) = static_cast<double>(j) * gap_penalty;
    F(0, j) = 'l';
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      double diag = H(i - 1, j - 1) + sim(i - 1, j - 1);
      double left = H(i, j - 1) + gap_penalty;  // gap-tgt
      double up = H(i - 1, j) + gap_penalty;    // gap-src
      // ties: match > gap-tgt > gap-src
      double best = diag;
      char f = 'd';
      if (left > best) { best = left; f = 'l'; }
      if (up > best) { best = up; f = 'u'; }
      H(i, j) = best;
      F(i, j) = f;
    }
  }

  AlignmentPath path;
  path.total_score = H(n, m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    char f = F(i, j);
    if (f == 'd') {
      path.steps.push_back({StepKind::Match, i - 1, j - 1});
      --i; --j;
    } else if (f == 'l') {
      path.steps.push_back({StepKind::GapTgt, 0, j - 1});
      --j;
    } else {
      path.steps.push_back({StepKind::GapSrc, i - 1, 0});
      --i;
    }
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

std::vector<MinedPair> extract_mined_pairs(const AlignmentPath& path,
                                           const SimilarityMatrix& sim,
                                           const std::vector<SentenceRecord>& src,
                                           const std::vector<SentenceRecord>& tgt,
                                           const std::string& doc_pair_id,
                                           double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("extract_mined_pairs: tau must be in (0,1)");
  std::vector<MinedPair> out;
  for (const auto& step : path.steps) {
    if (step.kind != StepKind::Match) continue;
    double score = sim(step.i, step.j);
    if (score < tau) continue;
    out.push_back({src[step.i].raw, tgt[step.j].raw, score, doc_pair_id,
                   step.i, step.j});
  }
  return out;
}

MiningResult mine_collection(const std::vector<DocPairSentences>& doc_pairs,
                             const MaxMarginModel& model,
                             const TranslationLexicon& lexicon,
                             const MiningOptions& opts) {
  if (opts.workers < 1)
    throw std::invalid_argument("mine_collection: worker count must be >= 1");

  // canonical processing order: doc pair id
  std::vector<std::size_t> order(doc_pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return doc_pairs[a].id < doc_pairs[b].id;
  });

  struct Slot {
    std::vector<MinedPair> pairs;
    MiningReportRow row;
  };
  std::vector<Slot> slots(order.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= order.size()) break;
      const DocPairSentences& dp = doc_pairs[order[k]];
      Slot& slot = slots[k];
      slot.row.doc_pair_id = dp.id;
      slot.row.src_sentences = dp.src.size();
      slot.row.tgt_sentences = dp.tgt.size();
      try {
        SimilarityMatrix sim = build_similarity_matrix(dp.src, dp.tgt, model,
                                                       lexicon, opts.max_dim);
        AlignmentPath path = nw_align(sim, opts.gap_penalty);
        slot.pairs = extract_mined_pairs(path, sim, dp.src, dp.tgt, dp.id,
                                         opts.tau);
        slot.row.mined = slot.pairs.size();
      } catch (const std::exception& e) {
        slot.row.failed = true;
        slot.row.error = e.what();
      }
    }
  };

  unsigned n_threads = std::min<std::size_t>(opts.workers, std::max<std::size_t>(order.size(), 1));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  MiningResult result;
  std::unordered_set<std::string> src_vocab, tgt_vocab;
  for (auto& slot : slots) {
    result.report.rows.push_back(slot.row);
    if (slot.row.failed) {
      ++result.report.failed_doc_pairs;
      continue;
    }
    for (auto& p : slot.pairs) {
      for (const auto& t : tokenize(p.src)) {
        ++result.report.src_words;
        src_vocab.insert(t);
      }
      for (const auto& t : tokenize(p.tgt)) {
        ++result.report.tgt_words;
        tgt_vocab.insert(t);
      }
      result.pairs.push_back(std::move(p));
    }
  }
  result.report.total_pairs_mined = result.pairs.size();
  result.report.src_unique_words = src_vocab.size();
  result.report.tgt_unique_words = tgt_vocab.size();
  return result;
}

void write_bitext(const std::vector<MinedPair>& pairs,
                  const std::string& src_path, const std::string& tgt_path,
                  const std::string& provenance_tsv_path) {
  std::ofstream src_out(src_path), tgt_out(tgt_path), prov(provenance_tsv_path);
  if (!src_out || !tgt_out || !prov)
    throw std::runtime_error("cannot write bitext outputs");
  prov << "doc_pair_id\tsrc_idx\ttgt_idx\tscore\n";
  prov.precision(6);
  for (const auto& p : pairs) {
    src_out << p.src << '\n';
    tgt_out << p.tgt << '\n';
    prov << p.doc_pair_id << '\t' << p.i << '\t' << p.j << '\t' << std::fixed
         << p.score << '\n';
    prov.unsetf(std::ios::fixed);
  }
}

void write_mining_report(const MiningReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mining report: " + path);
  out << "doc_pair_id\tsrc_sentences\ttgt_sentences\tmined\tstatus\n";
  for (const auto& r : report.rows)
    out << r.doc_pair_id << '\t' << r.src_sentences << '\t' << r.tgt_sentences
        << '\t' << r.mined << '\t' << (r.failed ? ("failed: " + r.error) : "ok")
        << '\n';
  out << "TOTAL\tsentences=" << report.total_pairs_mined
      << "\tsrc_words=" << report.src_words << ",tgt_words=" << report.tgt_words
      << "\tsrc_unique=" << report.src_unique_words
      << ",tgt_unique=" << report.tgt_unique_words
      << "\tfailed=" << report.failed_doc_pairs << '\n';
}

}  // namespace corpusmine
