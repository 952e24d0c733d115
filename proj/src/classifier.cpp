#include "corpusmine/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "corpusmine/ingest.hpp"

namespace corpusmine {

const std::array<const char*, kNumFeatures> kFeatureNames = {
    "len_ratio",      "src_coverage",  "tgt_coverage", "avg_translation_prob",
    "number_overlap", "punct_overlap", "bias"};

namespace {

bool is_number_token(const std::string& t) {
  for (char c : t)
    if (c >= '0' && c <= '9') return true;
  return false;
}

bool is_punct_token(const std::string& t) {
  if (t.empty()) return false;
  for (char32_t cp : decode_utf8(t)) {
    bool p = (cp < 0x80 && std::ispunct(static_cast<int>(cp))) ||
             cp == 0x2013 || cp == 0x2014 || cp == 0x2018 || cp == 0x2019 ||
             cp == 0x201C || cp == 0x201D || cp == 0x201E || cp == 0xAB ||
             cp == 0xBB || cp == 0x2026;
    if (!p) return false;
  }
  return true;
}

double jaccard(const std::unordered_set<std::string>& a,
               const std::unordered_set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) /
         static_cast<double>(a.size() + b.size() - inter);
}

struct TokenIndex {
  std::unordered_set<std::string> exact;
  std::unordered_set<std::string> lower;
  explicit TokenIndex(const std::vector<std::string>& tokens) {
    for (const auto& t : tokens) {
      exact.insert(t);
      lower.insert(lowercase_utf8(t));
    }
  }
  bool contains(const std::string& w) const {
    return exact.count(w) || lower.count(lowercase_utf8(w));
  }
};

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double hinge_objective(const std::vector<double>& w,
                       const std::vector<std::pair<FeatureVector, int>>& data,
                       double lambda) {
  double loss = 0.0;
  for (const auto& [f, y] : data) {
    double m = 0.0;
    for (std::size_t k = 0; k < kNumFeatures; ++k) m += w[k] * f.v[k];
    loss += std::max(0.0, 1.0 - y * m);
  }
  loss /= static_cast<double>(data.size());
  double reg = 0.0;
  for (double wk : w) reg += wk * wk;
  return loss + 0.5 * lambda * reg;
}

// Platt-style sigmoid fit on (margin, label) pairs by gradient descent on
// the cross-entropy with the usual smoothed targets.
std::pair<double, double> fit_calibration(const std::vector<double>& margins,
                                          const std::vector<int>& labels) {
  std::size_t n_pos = 0, n_neg = 0;
  for (int y : labels) (y > 0 ? n_pos : n_neg)++;
  double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
  double t_neg = 1.0 / (n_neg + 2.0);
  double a = 1.0, b = 0.0;
  double lr = 0.1;
  double prev = 1e300;
  for (int iter = 0; iter < 2000; ++iter) {
    double ga = 0.0, gb = 0.0, obj = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
      double t = labels[i] > 0 ? t_pos : t_neg;
      double p = sigmoid(a * margins[i] + b);
      p = std::clamp(p, 1e-12, 1.0 - 1e-12);
      obj += -(t * std::log(p) + (1 - t) * std::log(1 - p));
      double g = p - t;
      ga += g * margins[i];
      gb += g;
    }
    ga /= margins.size();
    gb /= margins.size();
    a -= lr * ga;
    b -= lr * gb;
    if (std::abs(prev - obj) < 1e-10) break;
    prev = obj;
  }
  return {a, b};
}

}  // namespace

double MaxMarginModel::margin(const FeatureVector& f) const {
  if (weights.size() != kNumFeatures)
    throw std::runtime_error("model/feature dimension mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < kNumFeatures; ++k) m += weights[k] * f.v[k];
  return m;
}

FeatureVector extract_features(const std::vector<std::string>& src_tokens,
                               const std::vector<std::string>& tgt_tokens,
                               const TranslationLexicon& lexicon) {
  if (src_tokens.empty() || tgt_tokens.empty())
    throw std::invalid_argument("extract_features: empty sentence");

  FeatureVector f;
  double ns = static_cast<double>(src_tokens.size());
  double nt = static_cast<double>(tgt_tokens.size());
  f.v[0] = std::min(ns, nt) / std::max(ns, nt);

  TokenIndex tgt_index(tgt_tokens);
  std::size_t covered = 0;
  double prob_sum = 0.0;
  for (const auto& tok : src_tokens) {
    double best = 0.0;
    for (const auto& [tr, p] : lexicon.lookup(tok))
      if (tgt_index.contains(tr)) best = std::max(best, p);
    if (best > 0.0) {
      ++covered;
      prob_sum += best;
    }
  }
  f.v[1] = covered / ns;
  f.v[3] = covered ? prob_sum / covered : 0.0;

  TokenIndex src_index(src_tokens);
  std::size_t tgt_covered = 0;
  for (const auto& tok : tgt_tokens) {
    for (const auto& [sw, p] : lexicon.reverse_lookup(tok))
      if (src_index.contains(sw)) {
        ++tgt_covered;
        break;
      }
  }
  f.v[2] = tgt_covered / nt;

  std::unordered_set<std::string> src_nums, tgt_nums, src_punct, tgt_punct;
  for (const auto& t : src_tokens) {
    if (is_number_token(t)) src_nums.insert(t);
    else if (is_punct_token(t)) src_punct.insert(t);
  }
  for (const auto& t : tgt_tokens) {
    if (is_number_token(t)) tgt_nums.insert(t);
    else if (is_punct_token(t)) tgt_punct.insert(t);
  }
  f.v[4] = jaccard(src_nums, tgt_nums);
  f.v[5] = jaccard(src_punct, tgt_punct);
  f.v[6] = 1.0;
  return f;
}

TrainingSet generate_training_set(const std::vector<SentencePair>& corpus,
                                  int k, std::uint64_t seed) {
  if (corpus.size() < 2)
    throw std::invalid_argument("generate_training_set: need >= 2 pairs");
  TrainingSet out;
  out.positives = corpus;
  if (k <= 0) return out;

  std::mt19937_64 rng(seed);
  const std::size_t n = corpus.size();
  auto key = [](const SentencePair& p) {
    std::string k = detokenize(p.src);
    k += '\t';
    k += detokenize(p.tgt);
    return k;
  };
  std::unordered_set<std::string> positive_keys;
  for (const auto& p : corpus) positive_keys.insert(key(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      std::size_t pick = i;
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::size_t cand;
        if (j % 2 == 0) {
          // near-window negative: +-5 sentences around the true counterpart
          long off = static_cast<long>(rng() % 11) - 5;
          long c = static_cast<long>(i) + off;
          if (c < 0 || c >= static_cast<long>(n)) continue;
          cand = static_cast<std::size_t>(c);
        } else {
          cand = rng() % n;
        }
        if (cand == i) continue;
        if (corpus[cand].tgt == corpus[i].tgt) continue;
        if (positive_keys.count(key({corpus[i].src, corpus[cand].tgt}))) continue;
        pick = cand;
        break;
      }
      if (pick == i) continue;  // tiny/degenerate corpus
      out.negatives.push_back({corpus[i].src, corpus[pick].tgt});
    }
  }
  return out;
}

TrainedClassifier train_classifier(const std::vector<FeatureVector>& positives,
                                   const std::vector<FeatureVector>& negatives,
                                   const TrainOptions& opts) {
  if (positives.empty() || negatives.empty())
    throw std::invalid_argument("train_classifier: need both classes");

  std::mt19937_64 rng(opts.seed);
  auto split = [&](const std::vector<FeatureVector>& all) {
    std::vector<std::size_t> idx(all.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t hold = all.size() >= 10 ? all.size() / 10
                      : all.size() >= 2 ? 1
                                        : 0;
    return std::pair{std::vector<std::size_t>(idx.begin(), idx.end() - hold),
                     std::vector<std::size_t>(idx.end() - hold, idx.end())};
  };
  auto [pos_train, pos_hold] = split(positives);
  auto [neg_train, neg_hold] = split(negatives);

  std::vector<std::pair<FeatureVector, int>> train;
  for (auto i : pos_train) train.emplace_back(positives[i], +1);
  for (auto i : neg_train) train.emplace_back(negatives[i], -1);

  std::vector<double> w(kNumFeatures, 0.0), w_sum(kNumFeatures, 0.0);
  std::size_t t = 0, updates = 0;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainedClassifier result;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t oi : order) {
      const auto& [f, y] = train[oi];
      ++t;
      double eta = opts.eta0 / (1.0 + opts.lambda * opts.eta0 * t);
      double m = 0.0;
      for (std::size_t kk = 0; kk < kNumFeatures; ++kk) m += w[kk] * f.v[kk];
      for (std::size_t kk = 0; kk < kNumFeatures; ++kk) {
        double grad = opts.lambda * w[kk];
        if (y * m < 1.0) grad -= y * f.v[kk];
        w[kk] -= eta * grad;
        if (!std::isfinite(w[kk]))
          throw std::runtime_error("train_classifier: non-finite weights "
                                   "(reduce eta0 or lambda)");
        w_sum[kk] += w[kk];
      }
      ++updates;
    }
    std::vector<double> w_avg(kNumFeatures);
    for (std::size_t kk = 0; kk < kNumFeatures; ++kk)
      w_avg[kk] = w_sum[kk] / static_cast<double>(updates);
    double obj = hinge_objective(w_avg, train, opts.lambda);
    if (!std::isfinite(obj))
      throw std::runtime_error("train_classifier: non-finite loss");
    result.epoch_loss.push_back(obj);
  }

  MaxMarginModel model;
  model.weights.resize(kNumFeatures);
  for (std::size_t kk = 0; kk < kNumFeatures; ++kk)
    model.weights[kk] = w_sum[kk] / static_cast<double>(updates);
  model.threshold = opts.threshold;

  // calibration margins from the held-out split (training split when the
  // data is too small to hold anything out)
  std::vector<double> margins;
  std::vector<int> labels;
  auto add_margins = [&](const std::vector<FeatureVector>& all,
                         const std::vector<std::size_t>& idx, int y) {
    for (auto i : idx) {
      FeatureVector f = all[i];
      margins.push_back(model.margin(f));
      labels.push_back(y);
    }
  };
  if (!pos_hold.empty() && !neg_hold.empty()) {
    add_margins(positives, pos_hold, +1);
    add_margins(negatives, neg_hold, -1);
  } else {
    add_margins(positives, pos_train, +1);
    add_margins(negatives, neg_train, -1);
  }
  auto [a, b] = fit_calibration(margins, labels);
  model.calib_slope = a;
  model.calib_intercept = b;
  result.model = std::move(model);
  return result;
}

double score_pair(const MaxMarginModel& model, const FeatureVector& f) {
  double p = sigmoid(model.calib_slope * model.margin(f) + model.calib_intercept);
  return std::clamp(p, 1e-12, 1.0 - 1e-12);
}

void MaxMarginModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out.precision(17);
  out << "corpusmine classifier v1\n";
  out << "features";
  for (const char* name : kFeatureNames) out << ' ' << name;
  out << "\nweights";
  for (double wk : weights) out << ' ' << wk;
  out << "\ncalibration " << calib_slope << ' ' << calib_intercept;
  out << "\nthreshold " << threshold << '\n';
}

MaxMarginModel MaxMarginModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "corpusmine classifier v1")
    throw std::runtime_error("unrecognized model format: " + path);
  MaxMarginModel model;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "features") {
      for (const char* expected : kFeatureNames) {
        std::string name;
        ss >> name;
        if (name != expected)
          throw std::runtime_error("model feature mismatch: got `" + name +
                                   "`, expected `" + expected + "`");
      }
    } else if (tag == "weights") {
      double v;
      while (ss >> v) model.weights.push_back(v);
    } else if (tag == "calibration") {
      ss >> model.calib_slope >> model.calib_intercept;
    } else if (tag == "threshold") {
      ss >> model.threshold;
    }
  }
  if (model.weights.size() != kNumFeatures)
    throw std::runtime_error("model weight count mismatch in " + path);
  return model;
}

}  // namespace corpusmine
