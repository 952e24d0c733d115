#include "corpusmine/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "CLI11.hpp"
#include "corpusmine/aligner.hpp"
#include "corpusmine/analogy.hpp"
#include "corpusmine/classifier.hpp"
#include "corpusmine/evalmetrics.hpp"
#include "corpusmine/filterlm.hpp"
#include "corpusmine/ingest.hpp"
#include "corpusmine/lexicon.hpp"

namespace fs = std::filesystem;

namespace corpusmine {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::vector<std::string>> read_tokenized(const std::string& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : read_lines(path)) out.push_back(tokenize(line));
  return out;
}

TokenizerOptions tokenizer_options(const PipelineConfig& cfg) {
  TokenizerOptions opts;
  std::istringstream ss(cfg.abbreviations);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) opts.abbreviations.insert(item);
  return opts;
}

// Artifacts are written under a .partial suffix and renamed on stage
// success, so an interrupted stage leaves only .partial files behind.
class StageOutputs {
 public:
  std::string path(const std::string& final_path) {
    files_.push_back(final_path);
    return final_path + ".partial";
  }
  std::vector<std::string> commit() {
    for (const auto& f : files_) fs::rename(f + ".partial", f);
    return files_;
  }

 private:
  std::vector<std::string> files_;
};

struct HarvestData {
  std::vector<ComparableDocPair> pairs;
};

HarvestData load_harvest_input(const PipelineConfig& cfg) {
  HarvestData data;
  if (!cfg.data_dir.empty()) {
    auto src_docs = load_plain_directory(cfg.data_dir, cfg.src_lang);
    auto tgt_docs = load_plain_directory(cfg.data_dir, cfg.tgt_lang);
    data.pairs = load_manifest_pairs(cfg.data_dir, src_docs, tgt_docs);
    return data;
  }
  std::ifstream src_in(cfg.src_dump), tgt_in(cfg.tgt_dump);
  if (!src_in) throw std::runtime_error("cannot open dump: " + cfg.src_dump);
  if (!tgt_in) throw std::runtime_error("cannot open dump: " + cfg.tgt_dump);
  auto src_docs = parse_dump(src_in, cfg.src_lang);
  auto tgt_docs = parse_dump(tgt_in, cfg.tgt_lang);
  // iterate from the smaller collection; its interwiki links drive pairing
  if (src_docs.size() <= tgt_docs.size()) {
    data.pairs = pair_documents(src_docs, tgt_docs);
  } else {
    auto flipped = pair_documents(tgt_docs, src_docs);
    for (auto& p : flipped) data.pairs.push_back({p.tgt, p.src, p.link_source});
  }
  return data;
}

std::vector<DocPairSentences> segment_pairs(const std::vector<ComparableDocPair>& pairs,
                                            const TokenizerOptions& opts) {
  std::vector<DocPairSentences> out;
  for (const auto& p : pairs) {
    DocPairSentences dp;
    dp.id = p.src.doc_id + "|" + p.tgt.doc_id;
    dp.src = segment_and_tokenize(p.src.body, opts);
    dp.tgt = segment_and_tokenize(p.tgt.body, opts);
    if (dp.src.empty() || dp.tgt.empty()) continue;
    out.push_back(std::move(dp));
  }
  return out;
}

std::vector<DocPairSentences> load_harvested_collection(const PipelineConfig& cfg) {
  fs::path docs = fs::path(cfg.output_dir) / "docs";
  std::string pairs_tsv = (fs::path(cfg.output_dir) / "doc_pairs.tsv").string();
  if (!fs::exists(pairs_tsv))
    throw std::runtime_error("missing artifact: " + pairs_tsv +
                             " (run the harvest stage first)");
  TokenizerOptions opts = tokenizer_options(cfg);
  std::vector<DocPairSentences> out;
  auto lines = read_lines(pairs_tsv);
  for (std::size_t i = 1; i < lines.size(); ++i) {  // skip header
    if (lines[i].empty()) continue;
    std::istringstream ss(lines[i]);
    std::string src_id, tgt_id;
    std::getline(ss, src_id, '\t');
    std::getline(ss, tgt_id, '\t');
    DocPairSentences dp;
    dp.id = src_id + "|" + tgt_id;
    auto read_doc = [&](const std::string& lang, const std::string& id) {
      std::ifstream in(docs / lang / (id + ".txt"));
      if (!in)
        throw std::runtime_error("missing harvested document: " +
                                 (docs / lang / (id + ".txt")).string());
      std::ostringstream body;
      body << in.rdbuf();
      return segment_and_tokenize(body.str(), opts);
    };
    dp.src = read_doc(cfg.src_lang, src_id);
    dp.tgt = read_doc(cfg.tgt_lang, tgt_id);
    if (dp.src.empty() || dp.tgt.empty()) continue;
    out.push_back(std::move(dp));
  }
  return out;
}

std::vector<SentencePair> load_seed_bitext(const PipelineConfig& cfg) {
  auto src = read_lines(cfg.seed_src);
  auto tgt = read_lines(cfg.seed_tgt);
  if (src.size() != tgt.size())
    throw std::runtime_error("seed corpus line count mismatch: " + cfg.seed_src +
                             " vs " + cfg.seed_tgt);
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < src.size(); ++i) {
    SentencePair p{tokenize(src[i]), tokenize(tgt[i])};
    if (p.src.empty() || p.tgt.empty()) continue;
    out.push_back(std::move(p));
  }
  return out;
}

const char* link_source_name(LinkSource s) {
  switch (s) {
    case LinkSource::Interwiki: return "interwiki";
    case LinkSource::ArchiveId: return "archive-id";
    default: return "manual";
  }
}

}  // namespace

void write_run_manifest(const PipelineConfig& cfg, const std::string& stage) {
  fs::create_directories(cfg.output_dir);
  std::ofstream out(fs::path(cfg.output_dir) / "manifest.txt",
                    std::ios::app);
  std::string canonical;
  for (const auto& [k, v] : cfg.raw) canonical += k + "=" + v + "\n";
  out << "stage=" << stage << " config_hash=" << std::hex << fnv1a(canonical)
      << std::dec << " seed=" << cfg.seed << " workers=" << cfg.workers << '\n';
  for (const std::string& path :
       {cfg.src_dump, cfg.tgt_dump, cfg.lexicon_path, cfg.seed_src, cfg.seed_tgt,
        cfg.indomain_src, cfg.outdomain_src, cfg.indomain_tgt, cfg.outdomain_tgt,
        cfg.eval_hyp, cfg.eval_ref, cfg.model_path}) {
    if (path.empty() || !fs::exists(path) || fs::is_directory(path)) continue;
    out << "input " << path << " hash=" << std::hex << hash_file(path)
        << std::dec << '\n';
  }
}

std::vector<std::string> run_harvest(const PipelineConfig& cfg) {
  cfg.validate("harvest");
  HarvestData data = load_harvest_input(cfg);
  std::sort(data.pairs.begin(), data.pairs.end(),
            [](const ComparableDocPair& a, const ComparableDocPair& b) {
              return a.src.doc_id < b.src.doc_id;
            });

  fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir / "docs" / cfg.src_lang);
  fs::create_directories(out_dir / "docs" / cfg.tgt_lang);
  StageOutputs outputs;

  std::ofstream manifest(outputs.path((out_dir / "doc_pairs.tsv").string()));
  manifest << "doc_id_src\tdoc_id_tgt\tlink_source\tsrc_title\ttgt_title\n";
  for (const auto& p : data.pairs) {
    manifest << p.src.doc_id << '\t' << p.tgt.doc_id << '\t'
             << link_source_name(p.link_source) << '\t' << p.src.title << '\t'
             << p.tgt.title << '\n';
    std::ofstream s(outputs.path((out_dir / "docs" / cfg.src_lang /
                                  (p.src.doc_id + ".txt")).string()));
    s << p.src.body;
    std::ofstream t(outputs.path((out_dir / "docs" / cfg.tgt_lang /
                                  (p.tgt.doc_id + ".txt")).string()));
    t << p.tgt.body;
  }
  manifest.close();
  return outputs.commit();
}

std::vector<std::string> run_train_classifier(const PipelineConfig& cfg) {
  cfg.validate("train-classifier");
  auto corpus = load_seed_bitext(cfg);
  auto lexicon = load_lexicon(cfg.lexicon_path, cfg.prune_floor);
  TrainingSet ts = generate_training_set(corpus, cfg.negatives_k, cfg.seed);

  std::vector<FeatureVector> pos, neg;
  for (const auto& p : ts.positives)
    pos.push_back(extract_features(p.src, p.tgt, lexicon));
  for (const auto& p : ts.negatives)
    neg.push_back(extract_features(p.src, p.tgt, lexicon));

  TrainOptions topts;
  topts.lambda = cfg.lambda;
  topts.epochs = cfg.epochs;
  topts.seed = cfg.seed;
  topts.threshold = cfg.tau;
  TrainedClassifier trained = train_classifier(pos, neg, topts);

  fs::create_directories(cfg.output_dir);
  StageOutputs outputs;
  trained.model.save(
      outputs.path((fs::path(cfg.output_dir) / "classifier.model").string()));
  return outputs.commit();
}

std::vector<std::string> run_mine(const PipelineConfig& cfg) {
  cfg.validate("mine");
  MaxMarginModel model = MaxMarginModel::load(cfg.model_path);
  auto lexicon = load_lexicon(cfg.lexicon_path, cfg.prune_floor);
  auto collection = load_harvested_collection(cfg);

  MiningOptions mopts;
  mopts.tau = cfg.tau;
  mopts.gap_penalty = cfg.gap_penalty;
  mopts.max_dim = cfg.max_doc_dim;
  mopts.workers = cfg.workers;
  MiningResult result = mine_collection(collection, model, lexicon, mopts);

  fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  StageOutputs outputs;
  write_bitext(result.pairs, outputs.path((out_dir / "mined.src.txt").string()),
               outputs.path((out_dir / "mined.tgt.txt").string()),
               outputs.path((out_dir / "mined_provenance.tsv").string()));
  write_mining_report(result.report,
                      outputs.path((out_dir / "mining_report.tsv").string()));
  return outputs.commit();
}

std::vector<std::string> run_analogy(const PipelineConfig& cfg) {
  cfg.validate("analogy");
  auto lexicon = load_lexicon(cfg.lexicon_path, cfg.prune_floor);

  ParallelSeed seed;
  {
    auto src = read_lines(cfg.seed_src);
    auto tgt = read_lines(cfg.seed_tgt);
    if (src.size() != tgt.size())
      throw std::runtime_error("seed corpus line count mismatch");
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i].empty() || tgt[i].empty()) continue;
      seed.src.push_back(make_sentence_record(src[i]));
      seed.tgt.push_back(make_sentence_record(tgt[i]));
    }
  }

  auto quadruples = detect_analogies(seed);
  auto clusters = cluster_analogies(quadruples, seed, cfg.chain_depth);
  std::vector<RewritingModel> models;
  for (std::size_t c = 0; c < clusters.size(); ++c)
    if (auto m = extract_rewriting_model(clusters[c], seed, c))
      models.push_back(std::move(*m));

  fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);
  StageOutputs outputs;
  save_rewriting_models(models,
                        outputs.path((out_dir / "models.tsv").string()));

  // apply/validate against the harvested comparable collection when present
  std::vector<DocPairSentences> collection;
  if (fs::exists(out_dir / "doc_pairs.tsv"))
    collection = load_harvested_collection(cfg);

  std::ofstream quasi_src(outputs.path((out_dir / "quasi.src.txt").string()));
  std::ofstream quasi_tgt(outputs.path((out_dir / "quasi.tgt.txt").string()));
  std::ofstream prov(outputs.path((out_dir / "quasi_provenance.tsv").string()));
  std::ofstream review(outputs.path((out_dir / "quasi_review.txt").string()));
  prov << "model_id\torigin\tdoc_pair_id\n";

  std::unordered_set<std::string> emitted;
  auto emit = [&](const GeneratedPair& p, const char* origin,
                  const std::string& doc_id) {
    std::string src_line = detokenize(p.src_tokens);
    std::string tgt_line = detokenize(p.tgt_tokens);
    if (!emitted.insert(src_line + '\t' + tgt_line).second) return;
    quasi_src << src_line << '\n';
    quasi_tgt << tgt_line << '\n';
    prov << p.model_id << '\t' << origin << '\t' << doc_id << '\n';
  };

  for (const auto& dp : collection) {
    for (std::size_t m = 0; m < models.size(); ++m) {
      // validation: topic-aligned sentence combinations matching the model
      for (const auto& s : dp.src)
        for (const auto& t : dp.tgt)
          if (auto p = validate_pair_with_model(models[m], s.tokens, t.tokens,
                                                lexicon, m))
            emit(*p, "validated", dp.id);
      // generation from the source side
      for (const auto& s : dp.src) {
        ApplyResult r = apply_rewriting_model(models[m], s.tokens, lexicon, m);
        if (r.status == ApplyStatus::Generated) {
          emit(*r.pair, "generated", dp.id);
        } else if (r.status == ApplyStatus::Withheld) {
          review << detokenize(s.tokens) << '\t' << detokenize(r.review_tokens)
                 << '\n';
        }
      }
    }
  }
  quasi_src.close();
  quasi_tgt.close();
  prov.close();
  review.close();
  return outputs.commit();
}

std::vector<std::string> run_filter(const PipelineConfig& cfg) {
  cfg.validate("filter");
  fs::path out_dir(cfg.output_dir);
  std::string mined_src = (out_dir / "mined.src.txt").string();
  std::string mined_tgt = (out_dir / "mined.tgt.txt").string();
  if (!fs::exists(mined_src))
    throw std::runtime_error("missing artifact: " + mined_src +
                             " (run the mine stage first)");

  auto src_pairs = read_tokenized(mined_src);
  auto tgt_pairs = read_tokenized(mined_tgt);

  NGramLM in_src = train_ngram_lm(read_tokenized(cfg.indomain_src), cfg.lm_order,
                                  cfg.smoothing_k);
  NGramLM out_src = train_ngram_lm(read_tokenized(cfg.outdomain_src),
                                   cfg.lm_order, cfg.smoothing_k);
  bool bilingual = !cfg.indomain_tgt.empty();
  NGramLM in_tgt, out_tgt;
  if (bilingual) {
    in_tgt = train_ngram_lm(read_tokenized(cfg.indomain_tgt), cfg.lm_order,
                            cfg.smoothing_k);
    out_tgt = train_ngram_lm(read_tokenized(cfg.outdomain_tgt), cfg.lm_order,
                             cfg.smoothing_k);
  }

  std::vector<double> scores;
  for (std::size_t i = 0; i < src_pairs.size(); ++i) {
    double s = bilingual
                   ? moore_lewis_score_bilingual(in_src, out_src, src_pairs[i],
                                                 in_tgt, out_tgt, tgt_pairs[i])
                   : moore_lewis_score(in_src, out_src, src_pairs[i]);
    scores.push_back(s);
  }
  auto kept = filter_top(scores, cfg.keep_fraction);

  auto src_lines = read_lines(mined_src);
  auto tgt_lines = read_lines(mined_tgt);
  StageOutputs outputs;
  std::ofstream fs_out(outputs.path((out_dir / "filtered.src.txt").string()));
  std::ofstream ft_out(outputs.path((out_dir / "filtered.tgt.txt").string()));
  std::ofstream sc_out(outputs.path((out_dir / "filter_scores.tsv").string()));
  sc_out << "line\tscore\tkept\n";
  sc_out.precision(6);
  std::set<std::size_t> kept_set(kept.begin(), kept.end());
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    bool keep = kept_set.count(i) > 0;
    sc_out << i << '\t' << scores[i] << '\t' << (keep ? 1 : 0) << '\n';
    if (keep) {
      fs_out << src_lines[i] << '\n';
      ft_out << tgt_lines[i] << '\n';
    }
  }
  return outputs.commit();
}

std::vector<std::string> run_eval(const PipelineConfig& cfg) {
  cfg.validate("eval");
  auto hyp = read_tokenized(cfg.eval_hyp);
  auto ref = read_tokenized(cfg.eval_ref);
  EvalReport report = evaluate_corpus(hyp, ref, cfg.bootstrap_resamples,
                                      cfg.seed, /*smooth_bleu=*/true);
  fs::create_directories(cfg.output_dir);
  StageOutputs outputs;
  write_eval_report(report,
                    outputs.path((fs::path(cfg.output_dir) / "eval_report.tsv").string()));
  return outputs.commit();
}

std::vector<std::string> run_pipeline(const PipelineConfig& cfg) {
  cfg.validate("pipeline");
  std::vector<std::string> artifacts;
  auto append = [&](std::vector<std::string> v) {
    artifacts.insert(artifacts.end(), v.begin(), v.end());
  };
  append(run_harvest(cfg));
  append(run_train_classifier(cfg));
  PipelineConfig mine_cfg = cfg;
  mine_cfg.model_path = (fs::path(cfg.output_dir) / "classifier.model").string();
  append(run_mine(mine_cfg));
  append(run_analogy(cfg));
  if (!cfg.indomain_src.empty() && !cfg.outdomain_src.empty())
    append(run_filter(cfg));
  if (!cfg.eval_hyp.empty() && !cfg.eval_ref.empty()) append(run_eval(cfg));
  return artifacts;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"comparable-corpora mining toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  std::uint64_t seed_override = 0;
  unsigned workers_override = 0;
  bool seed_set = false, workers_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "pipeline config file")->required();
    sub->add_option("--output", output_override, "output directory override");
    sub->add_option("--seed", seed_override, "RNG seed override")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--workers", workers_override, "worker count override")
        ->each([&](const std::string&) { workers_set = true; });
  };

  std::vector<std::pair<std::string,
                        std::vector<std::string> (*)(const PipelineConfig&)>>
      stages = {{"harvest", run_harvest},
                {"train-classifier", run_train_classifier},
                {"mine", run_mine},
                {"analogy", run_analogy},
                {"filter", run_filter},
                {"eval", run_eval},
                {"pipeline", run_pipeline}};
  for (auto& [name, fn] : stages) add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    PipelineConfig cfg = load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    if (seed_set) cfg.seed = seed_override;
    if (workers_set) cfg.workers = workers_override;
    write_run_manifest(cfg, stage);
    std::vector<std::string> artifacts;
    for (auto& [name, fn] : stages)
      if (name == stage) artifacts = fn(cfg);
    for (const auto& a : artifacts) std::cout << a << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace corpusmine
