#ifndef CORPUSMINE_ALIGNER_HPP
#define CORPUSMINE_ALIGNER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "corpusmine/classifier.hpp"
#include "corpusmine/ingest.hpp"
#include "corpusmine/lexicon.hpp"

namespace corpusmine {

// Dense N x M matrix of calibrated pair scores, all cells in (0,1).
class SimilarityMatrix {
 public:
  SimilarityMatrix(std::size_t n, std::size_t m)
      : n_(n), m_(m), cells_(n * m, 0.0) {}

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return cells_[i * m_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) { return cells_[i * m_ + j]; }

  SimilarityMatrix transposed() const;

 private:
  std::size_t n_, m_;
  std::vector<double> cells_;
};

enum class StepKind { Match, GapSrc, GapTgt };

struct AlignmentStep {
  StepKind kind;
  // Match: both set.  GapSrc: i set (unmatched src sentence).
  // GapTgt: j set (unmatched tgt sentence).
  std::size_t i = 0;
  std::size_t j = 0;
};

struct AlignmentPath {
  std::vector<AlignmentStep> steps;
  double total_score = 0.0;
};

struct MinedPair {
  std::string src;
  std::string tgt;
  double score = 0.0;
  std::string doc_pair_id;
  std::size_t i = 0, j = 0;
};

struct MiningReportRow {
  std::string doc_pair_id;
  std::size_t src_sentences = 0, tgt_sentences = 0;
  std::size_t mined = 0;
  bool failed = false;
  std::string error;
};

struct MiningReport {
  std::vector<MiningReportRow> rows;
  std::size_t total_pairs_mined = 0;
  std::size_t src_words = 0, tgt_words = 0;
  std::size_t src_unique_words = 0, tgt_unique_words = 0;
  std::size_t failed_doc_pairs = 0;
};

struct DocPairSentences {
  std::string id;
  std::vector<SentenceRecord> src;
  std::vector<SentenceRecord> tgt;
};

// Scores every (src_i, tgt_j) sentence combination.  Rejects empty
// documents and documents beyond max_dim (split oversize documents
// upstream).  Cells are independent; `threads` > 1 splits rows.
SimilarityMatrix build_similarity_matrix(
    const std::vector<SentenceRecord>& src,
    const std::vector<SentenceRecord>& tgt, const MaxMarginModel& model,
    const TranslationLexicon& lexicon, std::size_t max_dim = 2000,
    unsigned threads = 1);

// Global alignment maximizing sum of match scores plus gap_penalty per
// gap.  H(i,j) = max(H(i-1,j-1)+s(i,j), H(i-1,j)+g, H(i,j-1)+g), ties
// broken match > gap-tgt > gap-src.  gap_penalty must be negative.
AlignmentPath nw_align(const SimilarityMatrix& sim, double gap_penalty);

// One MinedPair per match step whose cell score >= tau.
std::vector<MinedPair> extract_mined_pairs(const AlignmentPath& path,
                                           const SimilarityMatrix& sim,
                                           const std::vector<SentenceRecord>& src,
                                           const std::vector<SentenceRecord>& tgt,
                                           const std::string& doc_pair_id,
                                           double tau);

struct MiningOptions {
  double tau = 0.5;
  double gap_penalty = -0.3;
  std::size_t max_dim = 2000;
  unsigned workers = 1;
};

struct MiningResult {
  std::vector<MinedPair> pairs;  // canonical order: doc pair id, then i
  MiningReport report;
};

// Distributes whole document pairs across a worker pool.  Output is
// canonicalized by doc pair id and therefore independent of the worker
// count.  A failing pair is recorded in the report and skipped.
MiningResult mine_collection(const std::vector<DocPairSentences>& doc_pairs,
                             const MaxMarginModel& model,
                             const TranslationLexicon& lexicon,
                             const MiningOptions& opts = {});

// Bitext + provenance/report TSV writers (one sentence per line, line i of
// the src file parallel to line i of the tgt file).
void write_bitext(const std::vector<MinedPair>& pairs,
                  const std::string& src_path, const std::string& tgt_path,
                  const std::string& provenance_tsv_path);
void write_mining_report(const MiningReport& report, const std::string& path);

}  // namespace corpusmine

#endif
