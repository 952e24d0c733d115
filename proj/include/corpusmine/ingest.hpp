#ifndef CORPUSMINE_INGEST_HPP
#define CORPUSMINE_INGEST_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace corpusmine {

struct RawDocument {
  std::string doc_id;
  std::string lang;  // ISO-639-1
  std::string title;
  std::string body;
  // (lang, foreign title) pairs extracted from cross-language links
  std::vector<std::pair<std::string, std::string>> cross_links;
};

enum class LinkSource { Interwiki, ArchiveId, Manual };

struct ComparableDocPair {
  RawDocument src;
  RawDocument tgt;
  LinkSource link_source = LinkSource::Interwiki;
};

struct SentenceRecord {
  std::string raw;
  std::vector<std::string> tokens;
  std::map<char32_t, int> char_counts;
};

struct PairingStats {
  std::size_t missing_link_targets = 0;  // links naming absent tgt titles
  std::size_t tgt_already_used = 0;      // second src linking to a taken tgt
};

struct TokenizerOptions {
  std::set<std::string> abbreviations;  // tokens that never end a sentence
};

// Streaming reader over the page/title/text XML subset.  One page is held
// in memory at a time; the stream is consumed exactly once.
class DumpReader {
 public:
  DumpReader(std::istream& in, std::string lang);
  // Returns the next document, or nullopt at end of stream.
  // Throws std::runtime_error naming a byte offset on malformed XML.
  std::optional<RawDocument> next();

 private:
  std::istream& in_;
  std::string lang_;
  std::uint64_t offset_ = 0;
  std::uint64_t doc_counter_ = 0;
  std::string buf_;
  std::size_t buf_pos_ = 0;
  bool refill();
};

// Convenience wrapper: drains a DumpReader into a vector.
std::vector<RawDocument> parse_dump(std::istream& in, const std::string& lang);

// Plain-directory collection: <root>/<lang>/manifest.tsv lists
// `doc_id TAB title`, one article per <root>/<lang>/<doc_id>.txt.
// Missing article files are skipped; the count is reported through
// *skipped_out when non-null.
std::vector<RawDocument> load_plain_directory(const std::string& root,
                                              const std::string& lang,
                                              std::size_t* skipped_out = nullptr);

// Explicit pairs manifest `<root>/pairs.tsv` (doc_id_src TAB doc_id_tgt)
// for archive-style collections with no interwiki links.
std::vector<ComparableDocPair> load_manifest_pairs(
    const std::string& root, const std::vector<RawDocument>& src_docs,
    const std::vector<RawDocument>& tgt_docs);

// Pairs each src document with the tgt document its cross_links name,
// exact title match after NFC normalization.  Each tgt document is used at
// most once; src documents are processed in doc_id order.  Throws on
// duplicate titles in the tgt collection.
std::vector<ComparableDocPair> pair_documents(
    const std::vector<RawDocument>& src_docs,
    const std::vector<RawDocument>& tgt_docs,
    PairingStats* stats = nullptr);

// Wiki markup stripping per the documented rule set: nested {{...}},
// <...> tags (ref elements dropped with content), tables, link syntax
// [[a|b]] -> b and [[a]] -> a.  Interwiki links [[xx:Title]] are removed
// here; DumpReader extracts them into cross_links first.
std::string strip_markup(const std::string& wikitext);

// Deterministic sentence segmentation + tokenization.  Splits on .!? when
// followed by whitespace and an uppercase letter (or end of text), unless
// the preceding word is a known abbreviation.  Punctuation becomes
// separate tokens.  Blank body yields an empty list.
std::vector<SentenceRecord> segment_and_tokenize(
    const std::string& body, const TokenizerOptions& opts = {});

// Single sentence helper used throughout the pipeline: tokenizes one
// already-segmented sentence and fills char_counts.
SentenceRecord make_sentence_record(const std::string& raw);

std::vector<std::string> tokenize(const std::string& sentence);
std::string detokenize(const std::vector<std::string>& tokens);

// NFC normalization restricted to the Latin precomposed range used by the
// corpus languages (combining marks folded into precomposed letters).
std::string nfc_normalize(const std::string& utf8);

// UTF-8 decoding helper shared with the analogy module.
std::vector<char32_t> decode_utf8(const std::string& s);
std::map<char32_t, int> count_chars(const std::string& s);

}  // namespace corpusmine

#endif
