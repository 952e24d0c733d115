#ifndef CORPUSMINE_ANALOGY_HPP
#define CORPUSMINE_ANALOGY_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "corpusmine/ingest.hpp"
#include "corpusmine/lexicon.hpp"

namespace corpusmine {

// Token sequence mapped to integer symbols under a joint per-comparison
// vocabulary, so edit distance counts word-level edits.
struct SymbolCodedSentence {
  std::vector<int> codes;
};

// Codes both sentences against one shared vocabulary.
std::pair<SymbolCodedSentence, SymbolCodedSentence> symbol_code(
    const std::vector<std::string>& a, const std::vector<std::string>& b);

// Unit-cost edit distance over code sequences.
int word_levenshtein(const SymbolCodedSentence& a, const SymbolCodedSentence& b);
// Convenience: codes then measures.
int word_distance(const std::vector<std::string>& a,
                  const std::vector<std::string>& b);

// True iff count(A,c) - count(B,c) = count(C,c) - count(D,c) for every
// character of the union alphabet.
bool char_profile_holds(const SentenceRecord& a, const SentenceRecord& b,
                        const SentenceRecord& c, const SentenceRecord& d);

struct ParallelSeed {
  std::vector<SentenceRecord> src;  // aligned: src[i] translates tgt[i]
  std::vector<SentenceRecord> tgt;
};

// Indices into the seed corpus: A:B::C:D with aligned target counterparts.
struct AnalogyQuadruple {
  std::size_t a, b, c, d;
};

// Every ordered quadruple of distinct seed pairs satisfying
// dist(A,B)=dist(C,D), dist(A,C)=dist(B,D), the character-profile
// constraint, all on BOTH language sides.  Candidate generation prunes by
// grouping pairs on their source-side distance; results are identical to
// the unpruned O(n^4) scan.
std::vector<AnalogyQuadruple> detect_analogies(const ParallelSeed& seed);

struct AnalogyCluster {
  std::size_t member1, member2;           // seed pair indices, member1 < member2
  std::vector<std::size_t> extensions;    // E:F chain hits (chain_depth > 0)
};

// One {(A,A'),(C,C')} cluster per quadruple, deduplicated by unordered
// member set.  chain_depth > 0 searches for E:F with C:D::E:F and
// E:F::A:B among the detected quadruples.
std::vector<AnalogyCluster> cluster_analogies(
    const std::vector<AnalogyQuadruple>& quadruples, const ParallelSeed& seed,
    int chain_depth = 0);

// Bilingual prefix/suffix template with a translatable middle slot.
struct RewritingModel {
  std::vector<std::string> src_prefix, src_suffix;
  std::vector<std::string> tgt_prefix, tgt_suffix;
  std::size_t cluster_id = 0;
};

// Longest common token prefix of the two members, then longest common
// suffix of the remainders, per side.  No model when both source fixed
// parts are empty or a middle slot is empty for both members.
std::optional<RewritingModel> extract_rewriting_model(
    const AnalogyCluster& cluster, const ParallelSeed& seed,
    std::size_t cluster_id = 0);

struct Substitution {
  std::string src_word, tgt_word;
  double prob = 0.0;
};

struct GeneratedPair {
  std::vector<std::string> src_tokens;
  std::vector<std::string> tgt_tokens;
  std::size_t model_id = 0;
  std::vector<Substitution> substitutions;
};

enum class ApplyStatus { NoMatch, Generated, Withheld };

struct ApplyResult {
  ApplyStatus status = ApplyStatus::NoMatch;
  std::optional<GeneratedPair> pair;           // Generated only
  std::vector<std::string> review_tokens;      // Withheld: literal `unknown`
};

// Matches iff the sentence starts with src_prefix, ends with src_suffix
// and the middle is non-empty.  Middle tokens are translated with the
// best lexicon entry; any untranslatable token withholds the pair and
// routes the placeholder rendering to the review stream.
ApplyResult apply_rewriting_model(const RewritingModel& model,
                                  const std::vector<std::string>& src_tokens,
                                  const TranslationLexicon& lexicon,
                                  std::size_t model_id = 0);

// Accepts iff src matches the model's source side, tgt its target side,
// and every src middle token has some lexicon translation among the tgt
// middle tokens.
std::optional<GeneratedPair> validate_pair_with_model(
    const RewritingModel& model, const std::vector<std::string>& src_tokens,
    const std::vector<std::string>& tgt_tokens,
    const TranslationLexicon& lexicon, std::size_t model_id = 0);

// Model store TSV: src_prefix TAB src_suffix TAB tgt_prefix TAB tgt_suffix
// TAB cluster_id, tokens space-joined.
void save_rewriting_models(const std::vector<RewritingModel>& models,
                           const std::string& path);
std::vector<RewritingModel> load_rewriting_models(const std::string& path);

}  // namespace corpusmine

#endif
