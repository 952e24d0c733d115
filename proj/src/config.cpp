#include "corpusmine/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace corpusmine {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void bad_field(const std::string& key, const std::string& why) {
  throw std::runtime_error("config field `" + key + "`: " + why);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    bad_field(key, "not a number: `" + v + "`");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used;
    long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (...) {
    bad_field(key, "not an integer: `" + v + "`");
  }
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const std::string& name) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '[') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": expected `key = value`");
    std::string key = trim(t.substr(0, eq));
    std::string value = t.substr(eq + 1);
    std::size_t hash = value.find('#');
    if (hash != std::string::npos) value = value.substr(0, hash);
    value = unquote(trim(value));
    cfg.raw[key] = value;

    if (key == "src_dump") cfg.src_dump = value;
    else if (key == "tgt_dump") cfg.tgt_dump = value;
    else if (key == "data_dir") cfg.data_dir = value;
    else if (key == "src_lang") cfg.src_lang = value;
    else if (key == "tgt_lang") cfg.tgt_lang = value;
    else if (key == "lexicon") cfg.lexicon_path = value;
    else if (key == "seed_src") cfg.seed_src = value;
    else if (key == "seed_tgt") cfg.seed_tgt = value;
    else if (key == "indomain_src") cfg.indomain_src = value;
    else if (key == "outdomain_src") cfg.outdomain_src = value;
    else if (key == "indomain_tgt") cfg.indomain_tgt = value;
    else if (key == "outdomain_tgt") cfg.outdomain_tgt = value;
    else if (key == "abbreviations") cfg.abbreviations = value;
    else if (key == "eval_hyp") cfg.eval_hyp = value;
    else if (key == "eval_ref") cfg.eval_ref = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "model") cfg.model_path = value;
    else if (key == "tau") cfg.tau = to_double(key, value);
    else if (key == "gap_penalty") cfg.gap_penalty = to_double(key, value);
    else if (key == "negatives_k") cfg.negatives_k = static_cast<int>(to_int(key, value));
    else if (key == "lambda") cfg.lambda = to_double(key, value);
    else if (key == "epochs") cfg.epochs = static_cast<int>(to_int(key, value));
    else if (key == "lm_order") cfg.lm_order = static_cast<int>(to_int(key, value));
    else if (key == "smoothing_k") cfg.smoothing_k = to_double(key, value);
    else if (key == "keep_fraction") cfg.keep_fraction = to_double(key, value);
    else if (key == "prune_floor") cfg.prune_floor = to_double(key, value);
    else if (key == "chain_depth") cfg.chain_depth = static_cast<int>(to_int(key, value));
    else if (key == "workers") cfg.workers = static_cast<unsigned>(to_int(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "bootstrap_resamples") cfg.bootstrap_resamples = static_cast<int>(to_int(key, value));
    else if (key == "test_segments") cfg.test_segments = static_cast<int>(to_int(key, value));
    else if (key == "per_segment") cfg.per_segment = static_cast<int>(to_int(key, value));
    else if (key == "max_doc_dim") cfg.max_doc_dim = static_cast<std::size_t>(to_int(key, value));
    else
      throw std::runtime_error(name + ":" + std::to_string(lineno) +
                               ": unknown config key `" + key + "`");
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void PipelineConfig::validate(const std::string& stage) const {
  if (!(tau > 0.0 && tau < 1.0)) bad_field("tau", "must be in (0,1)");
  if (!(gap_penalty < 0.0)) bad_field("gap_penalty", "must be negative");
  if (negatives_k < 0) bad_field("negatives_k", "must be >= 0");
  if (!(lambda > 0.0)) bad_field("lambda", "must be positive");
  if (epochs < 1) bad_field("epochs", "must be >= 1");
  if (lm_order < 1 || lm_order > 5) bad_field("lm_order", "must be in 1..5");
  if (!(smoothing_k > 0.0)) bad_field("smoothing_k", "must be positive");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
    bad_field("keep_fraction", "must be in (0,1]");
  if (!(prune_floor >= 0.0)) bad_field("prune_floor", "must be >= 0");
  if (chain_depth < 0) bad_field("chain_depth", "must be >= 0");
  if (workers < 1) bad_field("workers", "must be >= 1");
  if (bootstrap_resamples < 100)
    bad_field("bootstrap_resamples", "must be >= 100");
  if (test_segments < 1) bad_field("test_segments", "must be >= 1");
  if (per_segment < 0) bad_field("per_segment", "must be >= 0");
  if (max_doc_dim < 1) bad_field("max_doc_dim", "must be >= 1");

  auto need = [&](const std::string& key, const std::string& path) {
    if (path.empty()) bad_field(key, "required for stage `" + stage + "`");
    if (!fs::exists(path)) bad_field(key, "path does not exist: " + path);
  };
  auto need_either = [&](const std::string& k1, const std::string& p1,
                         const std::string& k2, const std::string& p2) {
    if (p1.empty() && p2.empty())
      bad_field(k1 + "|" + k2, "one is required for stage `" + stage + "`");
    if (!p1.empty() && !fs::exists(p1)) bad_field(k1, "path does not exist: " + p1);
    if (!p2.empty() && !fs::exists(p2)) bad_field(k2, "path does not exist: " + p2);
  };

  if (stage == "harvest" || stage == "pipeline")
    need_either("src_dump", src_dump, "data_dir", data_dir);
  if (stage == "harvest" && !src_dump.empty()) need("tgt_dump", tgt_dump);
  if (stage == "train-classifier" || stage == "analogy" || stage == "pipeline") {
    need("seed_src", seed_src);
    need("seed_tgt", seed_tgt);
  }
  if (stage == "train-classifier" || stage == "mine" || stage == "analogy" ||
      stage == "pipeline")
    need("lexicon", lexicon_path);
  if (stage == "mine") need("model", model_path);
  if (stage == "filter") {
    need("indomain_src", indomain_src);
    need("outdomain_src", outdomain_src);
    if (!indomain_tgt.empty() || !outdomain_tgt.empty()) {
      need("indomain_tgt", indomain_tgt);
      need("outdomain_tgt", outdomain_tgt);
    }
  }
  if (stage == "eval") {
    need("eval_hyp", eval_hyp);
    need("eval_ref", eval_ref);
  }
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a(ss.str());
}

}  // namespace corpusmine
