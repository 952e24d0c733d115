#ifndef CORPUSMINE_CONFIG_HPP
#define CORPUSMINE_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>

namespace corpusmine {

// Flat TOML-style key = value configuration for the whole pipeline.
struct PipelineConfig {
  // paths (empty = stage-dependent optional)
  std::string src_dump, tgt_dump;     // dump XML inputs
  std::string data_dir;               // paired-directory collection root
  std::string src_lang = "pl", tgt_lang = "en";
  std::string lexicon_path;
  std::string seed_src, seed_tgt;     // sentence-aligned seed corpus
  std::string indomain_src, outdomain_src;  // LM training corpora
  std::string eval_hyp, eval_ref;
  std::string output_dir = "out";
  std::string model_path;             // trained classifier (mine input)
  std::string indomain_tgt, outdomain_tgt;  // optional: bilingual MML
  std::string abbreviations;          // comma-separated sentence-split stop list

  // hyperparameters
  double tau = 0.5;
  double gap_penalty = -0.3;
  int negatives_k = 3;
  double lambda = 1e-3;
  int epochs = 50;
  int lm_order = 3;
  double smoothing_k = 0.1;
  double keep_fraction = 0.5;
  double prune_floor = 1e-4;
  int chain_depth = 0;
  unsigned workers = 1;
  std::uint64_t seed = 42;
  int bootstrap_resamples = 1000;
  int test_segments = 200;
  int per_segment = 10;
  std::size_t max_doc_dim = 2000;

  std::map<std::string, std::string> raw;  // as parsed, for hashing

  // Throws std::runtime_error naming the offending field on range or
  // missing-path violations.  `stage` controls which paths must exist.
  void validate(const std::string& stage) const;
};

PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& text, const std::string& name);

// FNV-1a 64-bit, used for config and input hashing in run manifests.
std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t hash_file(const std::string& path);

}  // namespace corpusmine

#endif
