#ifndef CORPUSMINE_FILTERLM_HPP
#define CORPUSMINE_FILTERLM_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace corpusmine {

// Interpolated add-k smoothed n-gram model over tokenized sentences.
// p_m(w|h) = (c(h,w) + k*V*p_{m-1}(w|h')) / (c(h) + k*V), grounding at
// p_1(w) = (c(w) + k) / (N + k*V) with V the full predictable vocabulary
// (training words + <unk> + </s>).  Conditional distributions sum to one
// for every context and every probability is positive.
class NGramLM {
 public:
  static constexpr const char* kUnk = "<unk>";
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";

  NGramLM() = default;

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  std::size_t vocab_size() const { return vocab_.size(); }  // incl. <unk>, </s>

  // log probability (natural log) of a token given up to order-1 context
  // tokens; unknown words map to <unk>.
  double log_prob(const std::vector<std::string>& context,
                  const std::string& word) const;

  // Sum of log_prob over the sentence with boundary markers; also reports
  // the number of scored tokens (|sentence| + 1 for </s>).
  double sentence_log_prob(const std::vector<std::string>& tokens,
                           std::size_t* n_scored = nullptr) const;

  void save(const std::string& path) const;
  static NGramLM load(const std::string& path);

  friend NGramLM train_ngram_lm(const std::vector<std::vector<std::string>>&,
                                int, double);

 private:
  int order_ = 0;
  double add_k_ = 0.1;
  std::unordered_map<std::string, std::size_t> counts_;  // key: space-joined gram
  std::unordered_map<std::string, std::size_t> context_totals_;
  std::unordered_map<std::string, std::size_t> vocab_;   // word -> unigram count
  std::size_t total_tokens_ = 0;

  std::string map_word(const std::string& w) const;
};

// Deterministic; order in 1..5; throws on an empty corpus.
NGramLM train_ngram_lm(const std::vector<std::vector<std::string>>& corpus,
                       int order, double add_k = 0.1);

// Convex mixture of equal-order models; scoring API mirrors NGramLM.
struct LMMixture {
  std::vector<const NGramLM*> components;
  std::vector<double> weights;
  bool converged = true;
  std::vector<double> ll_trace;  // dev log-likelihood per EM iteration

  double log_prob(const std::vector<std::string>& context,
                  const std::string& word) const;
  double sentence_log_prob(const std::vector<std::string>& tokens,
                           std::size_t* n_scored = nullptr) const;
};

// exp of mean negative log probability per scored token.  Throws when the
// sentence list carries no tokens at all.
template <class LM>
double perplexity(const LM& lm, const std::vector<std::vector<std::string>>& sentences) {
  double lp = 0.0;
  std::size_t n = 0;
  for (const auto& s : sentences) {
    std::size_t k = 0;
    lp += lm.sentence_log_prob(s, &k);
    n += k;
  }
  if (n == 0) throw std::invalid_argument("perplexity: no tokens to score");
  return std::exp(-lp / static_cast<double>(n));
}

// Per-token cross-entropy difference H_in(s) - H_out(s); lower is more
// in-domain.
double moore_lewis_score(const NGramLM& in_lm, const NGramLM& out_lm,
                         const std::vector<std::string>& tokens);

// Bilingual ("modified") variant: source-side plus target-side difference.
double moore_lewis_score_bilingual(const NGramLM& in_src, const NGramLM& out_src,
                                   const std::vector<std::string>& src_tokens,
                                   const NGramLM& in_tgt, const NGramLM& out_tgt,
                                   const std::vector<std::string>& tgt_tokens);

// EM on dev log-likelihood; converges when no weight moves more than
// 1e-4, capped at max_iters (best-so-far returned with converged=false).
LMMixture interpolate_lms(const std::vector<const NGramLM*>& lms,
                          const std::vector<std::vector<std::string>>& dev_corpus,
                          int max_iters = 200);

// Keeps the ceil(fraction*N) lowest-scoring items, stable order; index
// list refers to the input order.
std::vector<std::size_t> filter_top(const std::vector<double>& scores,
                                    double keep_fraction);

}  // namespace corpusmine

#endif
