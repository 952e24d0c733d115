#include "corpusmine/filterlm.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace corpusmine {

namespace {

std::string join(const std::vector<std::string>& tokens, std::size_t from,
                 std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) {
    if (i > from) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

std::string NGramLM::map_word(const std::string& w) const {
  return vocab_.count(w) ? w : std::string(kUnk);
}

double NGramLM::log_prob(const std::vector<std::string>& context,
                         const std::string& word) const {
  const double v = static_cast<double>(vocab_.size());
  std::string w = map_word(word);

  // unigram ground
  double uni_count = 0.0;
  if (auto it = vocab_.find(w); it != vocab_.end())
    uni_count = static_cast<double>(it->second);
  double p = (uni_count + add_k_) /
             (static_cast<double>(total_tokens_) + add_k_ * v);

  // climb orders 2..order_, shortest context first
  std::size_t usable = std::min<std::size_t>(context.size(),
                                             static_cast<std::size_t>(order_) - 1);
  for (std::size_t len = 1; len <= usable; ++len) {
    std::vector<std::string> h(context.end() - len, context.end());
    for (auto& cw : h)
      if (cw != kBos) cw = map_word(cw);
    std::string hkey = join(h, 0, h.size());
    double ch = 0.0, chw = 0.0;
    if (auto it = context_totals_.find(hkey); it != context_totals_.end())
      ch = static_cast<double>(it->second);
    if (auto it = counts_.find(hkey + ' ' + w); it != counts_.end())
      chw = static_cast<double>(it->second);
    p = (chw + add_k_ * v * p) / (ch + add_k_ * v);
  }
  return std::log(p);
}

double NGramLM::sentence_log_prob(const std::vector<std::string>& tokens,
                                  std::size_t* n_scored) const {
  std::vector<std::string> padded;
  for (int i = 0; i < order_ - 1; ++i) padded.push_back(kBos);
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  padded.push_back(kEos);

  double lp = 0.0;
  std::size_t start = static_cast<std::size_t>(order_ - 1);
  for (std::size_t i = start; i < padded.size(); ++i) {
    std::vector<std::string> context(padded.begin() + (i - start),
                                     padded.begin() + i);
    lp += log_prob(context, padded[i]);
  }
  if (n_scored) *n_scored = tokens.size() + 1;
  return lp;
}

NGramLM train_ngram_lm(const std::vector<std::vector<std::string>>& corpus,
                       int order, double add_k) {
  if (order < 1 || order > 5)
    throw std::invalid_argument("train_ngram_lm: order must be in 1..5");
  if (corpus.empty())
    throw std::invalid_argument("train_ngram_lm: empty corpus");
  if (!(add_k > 0.0))
    throw std::invalid_argument("train_ngram_lm: add_k must be positive");

  NGramLM lm;
  lm.order_ = order;
  lm.add_k_ = add_k;
  lm.vocab_[NGramLM::kUnk] = 0;

  for (const auto& sentence : corpus) {
    std::vector<std::string> padded;
    for (int i = 0; i < order - 1; ++i) padded.push_back(NGramLM::kBos);
    padded.insert(padded.end(), sentence.begin(), sentence.end());
    padded.push_back(NGramLM::kEos);

    std::size_t start = static_cast<std::size_t>(order - 1);
    for (std::size_t i = start; i < padded.size(); ++i) {
      ++lm.total_tokens_;
      ++lm.vocab_[padded[i]];
      for (int k = 1; k <= order; ++k) {
        if (i + 1 < static_cast<std::size_t>(k)) break;
        std::size_t from = i + 1 - static_cast<std::size_t>(k);
        ++lm.counts_[join(padded, from, i + 1)];
        if (k > 1) ++lm.context_totals_[join(padded, from, i)];
      }
    }
  }
  return lm;
}

double LMMixture::log_prob(const std::vector<std::string>& context,
                           const std::string& word) const {
  double p = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i)
    p += weights[i] * std::exp(components[i]->log_prob(context, word));
  return std::log(p);
}

double LMMixture::sentence_log_prob(const std::vector<std::string>& tokens,
                                    std::size_t* n_scored) const {
  int order = components.front()->order();
  std::vector<std::string> padded;
  for (int i = 0; i < order - 1; ++i) padded.push_back(NGramLM::kBos);
  padded.insert(padded.end(), tokens.begin(), tokens.end());
  padded.push_back(NGramLM::kEos);

  double lp = 0.0;
  std::size_t start = static_cast<std::size_t>(order - 1);
  for (std::size_t i = start; i < padded.size(); ++i) {
    std::vector<std::string> context(padded.begin() + (i - start),
                                     padded.begin() + i);
    lp += log_prob(context, padded[i]);
  }
  if (n_scored) *n_scored = tokens.size() + 1;
  return lp;
}

double moore_lewis_score(const NGramLM& in_lm, const NGramLM& out_lm,
                         const std::vector<std::string>& tokens) {
  std::size_t n_in = 0, n_out = 0;
  double lp_in = in_lm.sentence_log_prob(tokens, &n_in);
  double lp_out = out_lm.sentence_log_prob(tokens, &n_out);
  return (-lp_in / static_cast<double>(n_in)) -
         (-lp_out / static_cast<double>(n_out));
}

double moore_lewis_score_bilingual(const NGramLM& in_src, const NGramLM& out_src,
                                   const std::vector<std::string>& src_tokens,
                                   const NGramLM& in_tgt, const NGramLM& out_tgt,
                                   const std::vector<std::string>& tgt_tokens) {
  return moore_lewis_score(in_src, out_src, src_tokens) +
         moore_lewis_score(in_tgt, out_tgt, tgt_tokens);
}

LMMixture interpolate_lms(const std::vector<const NGramLM*>& lms,
                          const std::vector<std::vector<std::string>>& dev_corpus,
                          int max_iters) {
  if (lms.size() < 2)
    throw std::invalid_argument("interpolate_lms: need >= 2 models");
  for (const auto* lm : lms)
    if (lm->order() != lms.front()->order())
      throw std::invalid_argument("interpolate_lms: mixed model orders");
  if (dev_corpus.empty())
    throw std::invalid_argument("interpolate_lms: empty dev corpus");

  const std::size_t n_lm = lms.size();
  const int order = lms.front()->order();

  // per-token component probabilities, computed once
  std::vector<std::vector<double>> token_probs;  // [token][component]
  for (const auto& sentence : dev_corpus) {
    std::vector<std::string> padded;
    for (int i = 0; i < order - 1; ++i) padded.push_back(NGramLM::kBos);
    padded.insert(padded.end(), sentence.begin(), sentence.end());
    padded.push_back(NGramLM::kEos);
    std::size_t start = static_cast<std::size_t>(order - 1);
    for (std::size_t i = start; i < padded.size(); ++i) {
      std::vector<std::string> context(padded.begin() + (i - start),
                                       padded.begin() + i);
      std::vector<double> probs(n_lm);
      for (std::size_t c = 0; c < n_lm; ++c)
        probs[c] = std::exp(lms[c]->log_prob(context, padded[i]));
      token_probs.push_back(std::move(probs));
    }
  }
  if (token_probs.empty())
    throw std::invalid_argument("interpolate_lms: dev corpus has no tokens");

  LMMixture mix;
  mix.components = lms;
  mix.weights.assign(n_lm, 1.0 / static_cast<double>(n_lm));
  mix.converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<double> acc(n_lm, 0.0);
    double ll = 0.0;
    for (const auto& probs : token_probs) {
      double mixture = 0.0;
      for (std::size_t c = 0; c < n_lm; ++c) mixture += mix.weights[c] * probs[c];
      ll += std::log(mixture);
      for (std::size_t c = 0; c < n_lm; ++c)
        acc[c] += mix.weights[c] * probs[c] / mixture;
    }
    mix.ll_trace.push_back(ll);
    double max_delta = 0.0;
    for (std::size_t c = 0; c < n_lm; ++c) {
      double next = acc[c] / static_cast<double>(token_probs.size());
      max_delta = std::max(max_delta, std::abs(next - mix.weights[c]));
      mix.weights[c] = next;
    }
    if (max_delta < 1e-4) {
      mix.converged = true;
      break;
    }
  }
  return mix;
}

std::vector<std::size_t> filter_top(const std::vector<double>& scores,
                                    double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
    throw std::invalid_argument("filter_top: keep fraction must be in (0,1]");
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  std::size_t keep = static_cast<std::size_t>(
      std::ceil(keep_fraction * static_cast<double>(scores.size())));
  idx.resize(std::min(keep, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

void NGramLM::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write LM: " + path);
  out.precision(12);
  out << "\\data\\\n";
  out << "order=" << order_ << " add_k=" << add_k_
      << " tokens=" << total_tokens_ << '\n';
  std::vector<std::vector<std::pair<std::string, std::size_t>>> by_order(order_);
  for (const auto& [gram, count] : counts_) {
    int words = 1 + static_cast<int>(std::count(gram.begin(), gram.end(), ' '));
    by_order[words - 1].emplace_back(gram, count);
  }
  for (int k = 1; k <= order_; ++k)
    out << "ngram " << k << '=' << by_order[k - 1].size() << '\n';
  for (int k = 1; k <= order_; ++k) {
    out << '\\' << k << "-grams:\n";
    auto& grams = by_order[k - 1];
    std::sort(grams.begin(), grams.end());
    for (const auto& [gram, count] : grams) {
      std::vector<std::string> parts;
      std::istringstream ss(gram);
      std::string w;
      while (ss >> w) parts.push_back(w);
      std::string word = parts.back();
      parts.pop_back();
      out << log_prob(parts, word) / std::log(10.0) << '\t' << gram << '\t'
          << count << '\n';
    }
  }
  out << "\\end\\\n";
}

NGramLM NGramLM::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open LM: " + path);
  NGramLM lm;
  std::string line;
  if (!std::getline(in, line) || line != "\\data\\")
    throw std::runtime_error("unrecognized LM format: " + path);
  if (!std::getline(in, line))
    throw std::runtime_error("truncated LM header: " + path);
  {
    std::istringstream ss(line);
    std::string field;
    while (ss >> field) {
      auto eq = field.find('=');
      if (eq == std::string::npos) continue;
      std::string key = field.substr(0, eq), val = field.substr(eq + 1);
      if (key == "order") lm.order_ = std::stoi(val);
      else if (key == "add_k") lm.add_k_ = std::stod(val);
      else if (key == "tokens") lm.total_tokens_ = std::stoull(val);
    }
  }
  if (lm.order_ < 1 || lm.order_ > 5)
    throw std::runtime_error("bad LM order in " + path);
  lm.vocab_[kUnk] = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\' || line.rfind("ngram ", 0) == 0)
      continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = line.rfind('\t');
    if (t1 == std::string::npos || t2 == t1)
      throw std::runtime_error("bad LM line: " + line);
    std::string gram = line.substr(t1 + 1, t2 - t1 - 1);
    std::size_t count = std::stoull(line.substr(t2 + 1));
    lm.counts_[gram] = count;
    std::size_t last_space = gram.rfind(' ');
    if (last_space == std::string::npos) {
      if (gram != kBos) lm.vocab_[gram] = count;
    } else {
      lm.context_totals_[gram.substr(0, last_space)] += count;
    }
  }
  return lm;
}

}  // namespace corpusmine
