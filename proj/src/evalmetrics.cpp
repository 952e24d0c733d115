#include "corpusmine/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

namespace corpusmine {

namespace {

std::map<std::string, int> ngram_counts(const TokenSeq& tokens, int n) {
  std::map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k) key.push_back(' ');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

std::size_t edit_distance(const TokenSeq& a, const TokenSeq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

double bleu(const std::vector<TokenSeq>& hypotheses,
            const std::vector<TokenSeq>& references, int max_n, bool smooth) {
  if (hypotheses.empty())
    throw std::invalid_argument("bleu: empty corpus");
  if (hypotheses.size() != references.size())
    throw std::invalid_argument("bleu: hypothesis/reference count mismatch");

  std::vector<long long> matched(max_n, 0), total(max_n, 0);
  long long hyp_len = 0, ref_len = 0;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    hyp_len += static_cast<long long>(hypotheses[s].size());
    ref_len += static_cast<long long>(references[s].size());
    for (int n = 1; n <= max_n; ++n) {
      auto hyp_counts = ngram_counts(hypotheses[s], n);
      auto ref_counts = ngram_counts(references[s], n);
      for (const auto& [gram, c] : hyp_counts) {
        total[n - 1] += c;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end())
          matched[n - 1] += std::min(c, it->second);  // clipped
      }
    }
  }

  double log_prec_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    double num = static_cast<double>(matched[n - 1]);
    double den = static_cast<double>(total[n - 1]);
    if (smooth && n >= 2) {
      num += 1.0;
      den += 1.0;
    }
    if (num <= 0.0 || den <= 0.0) return 0.0;
    log_prec_sum += std::log(num / den);
  }
  double bp = hyp_len < ref_len
                  ? std::exp(1.0 - static_cast<double>(ref_len) /
                                       static_cast<double>(hyp_len))
                  : 1.0;
  return bp * std::exp(log_prec_sum / max_n);
}

double ter(const TokenSeq& hypothesis, const TokenSeq& reference) {
  if (reference.empty())
    throw std::invalid_argument("ter: empty reference");
  return static_cast<double>(edit_distance(hypothesis, reference)) /
         static_cast<double>(reference.size());
}

double corpus_ter(const std::vector<TokenSeq>& hypotheses,
                  const std::vector<TokenSeq>& references) {
  if (hypotheses.size() != references.size())
    throw std::invalid_argument("corpus_ter: count mismatch");
  std::size_t edits = 0, ref_len = 0;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    if (references[s].empty())
      throw std::invalid_argument("corpus_ter: empty reference at line " +
                                  std::to_string(s + 1));
    edits += edit_distance(hypotheses[s], references[s]);
    ref_len += references[s].size();
  }
  if (ref_len == 0) throw std::invalid_argument("corpus_ter: empty references");
  return static_cast<double>(edits) / static_cast<double>(ref_len);
}

std::pair<double, double> bootstrap_ci(const CorpusMetric& metric,
                                       const std::vector<TokenSeq>& hypotheses,
                                       const std::vector<TokenSeq>& references,
                                       int resamples, std::uint64_t seed) {
  if (resamples < 100)
    throw std::invalid_argument("bootstrap_ci: need >= 100 resamples");
  if (hypotheses.empty() || hypotheses.size() != references.size())
    throw std::invalid_argument("bootstrap_ci: bad corpus");

  std::mt19937_64 rng(seed);
  const std::size_t n = hypotheses.size();
  std::vector<double> values;
  values.reserve(resamples);
  std::vector<TokenSeq> h(n), r(n);
  for (int rep = 0; rep < resamples; ++rep) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t pick = rng() % n;
      h[i] = hypotheses[pick];
      r[i] = references[pick];
    }
    values.push_back(metric(h, r));
  }
  std::sort(values.begin(), values.end());
  auto pct = [&](double q) {
    double pos = q * (values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  return {pct(0.025), pct(0.975)};
}

SplitResult make_test_split(std::size_t corpus_size, int n_segments,
                            int per_segment, std::uint64_t seed) {
  if (n_segments < 1)
    throw std::invalid_argument("make_test_split: need >= 1 segment");
  if (per_segment < 0)
    throw std::invalid_argument("make_test_split: negative per_segment");
  std::size_t minimum = static_cast<std::size_t>(n_segments) *
                        static_cast<std::size_t>(per_segment);
  if (corpus_size < minimum || (per_segment > 0 && corpus_size == 0))
    throw std::invalid_argument(
        "make_test_split: corpus of " + std::to_string(corpus_size) +
        " pairs is too small; need at least " + std::to_string(minimum));

  std::mt19937_64 rng(seed);
  SplitResult out;
  std::size_t seg_size = corpus_size / n_segments;  // remainder to last
  std::vector<bool> is_test(corpus_size, false);
  for (int s = 0; s < n_segments; ++s) {
    std::size_t lo = static_cast<std::size_t>(s) * seg_size;
    std::size_t hi = (s == n_segments - 1) ? corpus_size : lo + seg_size;
    std::vector<std::size_t> pool;
    for (std::size_t i = lo; i < hi; ++i) pool.push_back(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t take = std::min<std::size_t>(per_segment, pool.size());
    for (std::size_t k = 0; k < take; ++k) is_test[pool[k]] = true;
  }
  for (std::size_t i = 0; i < corpus_size; ++i)
    (is_test[i] ? out.test : out.train).push_back(i);
  return out;
}

EvalReport evaluate_corpus(const std::vector<TokenSeq>& hypotheses,
                           const std::vector<TokenSeq>& references,
                           int resamples, std::uint64_t seed, bool smooth_bleu) {
  EvalReport report;
  report.bleu_score = bleu(hypotheses, references, 4, smooth_bleu);
  report.ter_score = corpus_ter(hypotheses, references);
  report.bleu_ci = bootstrap_ci(
      [smooth_bleu](const std::vector<TokenSeq>& h, const std::vector<TokenSeq>& r) {
        return bleu(h, r, 4, smooth_bleu);
      },
      hypotheses, references, resamples, seed);
  report.ter_ci = bootstrap_ci(corpus_ter, hypotheses, references, resamples, seed);
  report.resamples = resamples;
  report.seed = seed;
  report.bleu_smoothed = smooth_bleu;
  return report;
}

void write_eval_report(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write eval report: " + path);
  out.precision(6);
  out << "metric\tpoint\tci_low\tci_high\tresamples\tseed\tvariant\n";
  out << "BLEU\t" << report.bleu_score << '\t' << report.bleu_ci.first << '\t'
      << report.bleu_ci.second << '\t' << report.resamples << '\t' << report.seed
      << '\t' << (report.bleu_smoothed ? "smoothed" : "unsmoothed") << '\n';
  out << "TER\t" << report.ter_score << '\t' << report.ter_ci.first << '\t'
      << report.ter_ci.second << '\t' << report.resamples << '\t' << report.seed
      << "\tno-shift\n";
  // reserved: NIST, METEOR (external resources required)
  out << "NIST\t-\t-\t-\t-\t-\treserved\n";
  out << "METEOR\t-\t-\t-\t-\t-\treserved\n";
}

}  // namespace corpusmine
