#ifndef CORPUSMINE_EVALMETRICS_HPP
#define CORPUSMINE_EVALMETRICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace corpusmine {

using TokenSeq = std::vector<std::string>;

// Corpus-level geometric mean of clipped n-gram precisions times the
// brevity penalty.  With smoothing off, a zero precision at any order
// zeroes the score; smoothing adds one to numerator and denominator for
// n >= 2.
double bleu(const std::vector<TokenSeq>& hypotheses,
            const std::vector<TokenSeq>& references, int max_n = 4,
            bool smooth = false);

// Word-level edit distance (insert/delete/substitute; no block shifts)
// divided by reference length.  Throws on an empty reference.
double ter(const TokenSeq& hypothesis, const TokenSeq& reference);

// Corpus TER: total edit distance over total reference length.
double corpus_ter(const std::vector<TokenSeq>& hypotheses,
                  const std::vector<TokenSeq>& references);

using CorpusMetric =
    std::function<double(const std::vector<TokenSeq>&, const std::vector<TokenSeq>&)>;

// Percentile 95% interval over sentence-level resampling with
// replacement; deterministic under the seed.
std::pair<double, double> bootstrap_ci(const CorpusMetric& metric,
                                       const std::vector<TokenSeq>& hypotheses,
                                       const std::vector<TokenSeq>& references,
                                       int resamples = 1000,
                                       std::uint64_t seed = 42);

struct SplitResult {
  std::vector<std::size_t> train;  // indices into the input corpus
  std::vector<std::size_t> test;
};

// Contiguous equal segments (remainder to the last), per_segment pairs
// sampled uniformly per segment; selected pairs removed from train.
SplitResult make_test_split(std::size_t corpus_size, int n_segments = 200,
                            int per_segment = 10, std::uint64_t seed = 42);

struct EvalReport {
  double bleu_score = 0.0;
  double ter_score = 0.0;
  std::pair<double, double> bleu_ci{0.0, 0.0};
  std::pair<double, double> ter_ci{0.0, 0.0};
  int resamples = 0;
  std::uint64_t seed = 0;
  bool bleu_smoothed = false;
};

EvalReport evaluate_corpus(const std::vector<TokenSeq>& hypotheses,
                           const std::vector<TokenSeq>& references,
                           int resamples = 1000, std::uint64_t seed = 42,
                           bool smooth_bleu = false);

// Report TSV: metric, point, ci_low, ci_high, resamples, seed, variant
// flags.  NIST/METEOR columns reserved but unpopulated.
void write_eval_report(const EvalReport& report, const std::string& path);

}  // namespace corpusmine

#endif
