#ifndef CORPUSMINE_CLASSIFIER_HPP
#define CORPUSMINE_CLASSIFIER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "corpusmine/lexicon.hpp"

namespace corpusmine {

// Fixed feature order; `bias` must stay last.
constexpr std::size_t kNumFeatures = 7;
extern const std::array<const char*, kNumFeatures> kFeatureNames;

struct FeatureVector {
  std::array<double, kNumFeatures> v{};

  double len_ratio() const { return v[0]; }
  double src_coverage() const { return v[1]; }
  double tgt_coverage() const { return v[2]; }
  double avg_translation_prob() const { return v[3]; }
  double number_overlap() const { return v[4]; }
  double punct_overlap() const { return v[5]; }
};

// Linear max-margin sentence-pair classifier with Platt-style probability
// calibration.  Immutable once trained; safe for concurrent scoring.
struct MaxMarginModel {
  std::vector<double> weights;       // aligned with kFeatureNames
  double calib_slope = 1.0;          // sigmoid(a * margin + b)
  double calib_intercept = 0.0;
  double threshold = 0.5;            // mining quality threshold tau

  double margin(const FeatureVector& f) const;
  void save(const std::string& path) const;
  static MaxMarginModel load(const std::string& path);
};

struct TrainOptions {
  double lambda = 1e-3;       // L2 regularization
  int epochs = 50;
  double eta0 = 1.0;          // eta_t = eta0 / (1 + lambda*eta0*t)
  std::uint64_t seed = 42;
  double threshold = 0.5;
};

struct TrainedClassifier {
  MaxMarginModel model;
  std::vector<double> epoch_loss;  // regularized hinge loss per epoch
};

struct SentencePair {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
};

// Throws on empty sentences; callers filter blanks beforehand.
FeatureVector extract_features(const std::vector<std::string>& src_tokens,
                               const std::vector<std::string>& tgt_tokens,
                               const TranslationLexicon& lexicon);

// Negative sampling: k per positive, half drawn from a +-5 sentence window
// around the true counterpart, half from anywhere in the corpus.  Seeded,
// reproducible; no sampled negative duplicates a positive.
struct TrainingSet {
  std::vector<SentencePair> positives;
  std::vector<SentencePair> negatives;
};
TrainingSet generate_training_set(const std::vector<SentencePair>& corpus,
                                  int k = 3, std::uint64_t seed = 42);

// Stochastic subgradient descent on regularized hinge loss with averaged
// weights; calibration fit on a held-out 10% split.
TrainedClassifier train_classifier(const std::vector<FeatureVector>& positives,
                                   const std::vector<FeatureVector>& negatives,
                                   const TrainOptions& opts = {});

// Calibrated probability, strictly in (0,1), monotone in the margin.
double score_pair(const MaxMarginModel& model, const FeatureVector& f);

}  // namespace corpusmine

#endif
