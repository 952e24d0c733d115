#include "corpusmine/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace fs = std::filesystem;

namespace corpusmine {

namespace {

constexpr std::size_t kChunk = 1 << 16;

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// (combining mark << 21 | base) -> precomposed.  Covers the Latin
// diacritics occurring in the corpus languages; full normalization would
// need ICU.
const std::unordered_map<std::uint64_t, char32_t>& composition_table() {
  static const std::unordered_map<std::uint64_t, char32_t> table = [] {
    std::unordered_map<std::uint64_t, char32_t> t;
    auto put = [&t](char32_t mark, char32_t base, char32_t composed) {
      t[(static_cast<std::uint64_t>(mark) << 21) | base] = composed;
    };
    // acute U+0301
    const char32_t acute = 0x301;
    put(acute, U'a', 0xE1); put(acute, U'A', 0xC1);
    put(acute, U'e', 0xE9); put(acute, U'E', 0xC9);
    put(acute, U'i', 0xED); put(acute, U'I', 0xCD);
    put(acute, U'o', 0xF3); put(acute, U'O', 0xD3);
    put(acute, U'u', 0xFA); put(acute, U'U', 0xDA);
    put(acute, U'c', 0x107); put(acute, U'C', 0x106);
    put(acute, U'n', 0x144); put(acute, U'N', 0x143);
    put(acute, U's', 0x15B); put(acute, U'S', 0x15A);
    put(acute, U'z', 0x17A); put(acute, U'Z', 0x179);
    put(acute, U'y', 0xFD); put(acute, U'Y', 0xDD);
    // grave U+0300
    const char32_t grave = 0x300;
    put(grave, U'a', 0xE0); put(grave, U'A', 0xC0);
    put(grave, U'e', 0xE8); put(grave, U'E', 0xC8);
    put(grave, U'i', 0xEC); put(grave, U'I', 0xCC);
    put(grave, U'o', 0xF2); put(grave, U'O', 0xD2);
    put(grave, U'u', 0xF9); put(grave, U'U', 0xD9);
    // circumflex U+0302
    const char32_t circ = 0x302;
    put(circ, U'a', 0xE2); put(circ, U'A', 0xC2);
    put(circ, U'e', 0xEA); put(circ, U'E', 0xCA);
    put(circ, U'i', 0xEE); put(circ, U'I', 0xCE);
    put(circ, U'o', 0xF4); put(circ, U'O', 0xD4);
    put(circ, U'u', 0xFB); put(circ, U'U', 0xDB);
    // diaeresis U+0308
    const char32_t diae = 0x308;
    put(diae, U'a', 0xE4); put(diae, U'A', 0xC4);
    put(diae, U'e', 0xEB); put(diae, U'E', 0xCB);
    put(diae, U'i', 0xEF); put(diae, U'I', 0xCF);
    put(diae, U'o', 0xF6); put(diae, U'O', 0xD6);
    put(diae, U'u', 0xFC); put(diae, U'U', 0xDC);
    // ogonek U+0328
    const char32_t ogonek = 0x328;
    put(ogonek, U'a', 0x105); put(ogonek, U'A', 0x104);
    put(ogonek, U'e', 0x119); put(ogonek, U'E', 0x118);
    // dot above U+0307
    const char32_t dot = 0x307;
    put(dot, U'z', 0x17C); put(dot, U'Z', 0x17B);
    // caron U+030C
    const char32_t caron = 0x30C;
    put(caron, U'c', 0x10D); put(caron, U'C', 0x10C);
    put(caron, U's', 0x161); put(caron, U'S', 0x160);
    put(caron, U'z', 0x17E); put(caron, U'Z', 0x17D);
    return t;
  }();
  return table;
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Token-edge punctuation: ASCII punctuation plus common typographic marks.
bool is_edge_punct_cp(char32_t cp) {
  if (cp < 0x80)
    return std::ispunct(static_cast<unsigned char>(cp)) != 0;
  switch (cp) {
    case 0x2013: case 0x2014:             // en/em dash
    case 0x2018: case 0x2019:             // single quotes
    case 0x201C: case 0x201D: case 0x201E: // double quotes
    case 0x00AB: case 0x00BB:             // guillemets
    case 0x2026:                          // ellipsis
      return true;
    default:
      return false;
  }
}

bool is_uppercase_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;
  if (cp >= 0x100 && cp <= 0x137) return cp % 2 == 0;
  if (cp >= 0x139 && cp <= 0x148) return cp % 2 == 1;
  if (cp >= 0x14A && cp <= 0x177) return cp % 2 == 0;
  if (cp == 0x178 || cp == 0x179 || cp == 0x17B || cp == 0x17D) return true;
  return false;
}

std::string unescape_entities(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t semi = s.find(';', i);
    if (semi == std::string::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (!ent.empty() && ent[0] == '#') {
      char32_t cp = 0;
      try {
        cp = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                 ? static_cast<char32_t>(std::stoul(ent.substr(2), nullptr, 16))
                 : static_cast<char32_t>(std::stoul(ent.substr(1)));
      } catch (...) {
        out.push_back(s[i++]);
        continue;
      }
      append_utf8(out, cp);
    } else {
      out.append(s, i, semi - i + 1);
    }
    i = semi + 1;
  }
  return out;
}

// Removes [[xx:Title]] links, collecting (xx, Title).
std::string extract_interwiki(
    const std::string& text,
    std::vector<std::pair<std::string, std::string>>& links) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (i + 1 < text.size() && text[i] == '[' && text[i + 1] == '[') {
      std::size_t close = text.find("]]", i + 2);
      if (close != std::string::npos) {
        std::string inner = text.substr(i + 2, close - i - 2);
        std::size_t colon = inner.find(':');
        if (colon >= 2 && colon <= 3 && colon != std::string::npos &&
            inner.find("[[") == std::string::npos) {
          bool lang_code = true;
          for (std::size_t k = 0; k < colon; ++k)
            if (inner[k] < 'a' || inner[k] > 'z') lang_code = false;
          if (lang_code) {
            links.emplace_back(inner.substr(0, colon), inner.substr(colon + 1));
            i = close + 2;
            continue;
          }
        }
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::string strip_braces(const std::string& s, char open, char close,
                         bool pipe_style) {
  // pipe_style strips {| ... |} tables, otherwise nested {{ ... }}.
  std::string out;
  out.reserve(s.size());
  int depth = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && s[i] == open &&
        s[i + 1] == (pipe_style ? '|' : open)) {
      ++depth;
      i += 2;
      continue;
    }
    if (depth > 0 && i + 1 < s.size() && s[i] == (pipe_style ? '|' : close) &&
        s[i + 1] == close) {
      --depth;
      i += 2;
      continue;
    }
    if (depth == 0) out.push_back(s[i]);
    ++i;
  }
  return out;
}

std::string strip_tags(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      // <ref>...</ref> disappears with its content
      if (s.compare(i, 4, "<ref") == 0) {
        std::size_t gt = s.find('>', i);
        if (gt != std::string::npos && s[gt - 1] == '/') {
          i = gt + 1;
          continue;
        }
        std::size_t end = s.find("</ref>", i);
        i = (end == std::string::npos) ? s.size() : end + 6;
        continue;
      }
      std::size_t gt = s.find('>', i);
      if (gt != std::string::npos) {
        i = gt + 1;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string strip_links(const std::string& s) {
  std::string cur = s;
  // innermost-first so nested file/link constructs resolve
  for (int pass = 0; pass < 8; ++pass) {
    std::string out;
    out.reserve(cur.size());
    bool changed = false;
    std::size_t i = 0;
    while (i < cur.size()) {
      if (i + 1 < cur.size() && cur[i] == '[' && cur[i + 1] == '[') {
        std::size_t close = cur.find("]]", i + 2);
        std::size_t next_open = cur.find("[[", i + 2);
        if (close != std::string::npos &&
            (next_open == std::string::npos || close < next_open)) {
          std::string inner = cur.substr(i + 2, close - i - 2);
          std::size_t colon = inner.find(':');
          std::size_t pipe = inner.rfind('|');
          if (colon != std::string::npos && (pipe == std::string::npos || colon < pipe)) {
            // namespace link (File:, Category:, ...) drops entirely
          } else if (pipe != std::string::npos) {
            out.append(inner.substr(pipe + 1));
          } else {
            out.append(inner);
          }
          changed = true;
          i = close + 2;
          continue;
        }
      }
      out.push_back(cur[i++]);
    }
    cur = std::move(out);
    if (!changed) break;
  }
  return cur;
}

std::string strip_quotes_and_lists(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::istringstream lines(s);
  std::string line;
  while (std::getline(lines, line)) {
    // leftover table rows
    if (!line.empty() && (line[0] == '|' || line[0] == '!')) continue;
    std::size_t start = 0;
    while (start < line.size() &&
           (line[start] == '*' || line[start] == '#' || line[start] == ':' ||
            line[start] == ';'))
      ++start;
    std::string body = line.substr(start);
    std::string noquote;
    for (std::size_t i = 0; i < body.size();) {
      if (body[i] == '\'' && i + 1 < body.size() && body[i + 1] == '\'') {
        while (i < body.size() && body[i] == '\'') ++i;
        continue;
      }
      noquote.push_back(body[i++]);
    }
    // section headings: == Title ==
    while (!noquote.empty() && (noquote.front() == '=' )) noquote.erase(0, 1);
    while (!noquote.empty() && (noquote.back() == '=')) noquote.pop_back();
    out += noquote;
    out.push_back('\n');
  }
  return out;
}

}  // namespace

std::vector<char32_t> decode_utf8(const std::string& s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    char32_t cp;
    int extra;
    if (c < 0x80) { cp = c; extra = 0; }
    else if ((c >> 5) == 0x6) { cp = c & 0x1F; extra = 1; }
    else if ((c >> 4) == 0xE) { cp = c & 0x0F; extra = 2; }
    else if ((c >> 3) == 0x1E) { cp = c & 0x07; extra = 3; }
    else { cp = 0xFFFD; extra = 0; }  // stray continuation byte
    for (int k = 0; k < extra; ++k) {
      if (i + 1 + k >= s.size()) { cp = 0xFFFD; extra = k; break; }
      unsigned char cc = static_cast<unsigned char>(s[i + 1 + k]);
      if ((cc >> 6) != 0x2) { cp = 0xFFFD; extra = k; break; }
      cp = (cp << 6) | (cc & 0x3F);
    }
    cps.push_back(cp);
    i += 1 + extra;
  }
  return cps;
}

std::map<char32_t, int> count_chars(const std::string& s) {
  std::map<char32_t, int> counts;
  for (char32_t cp : decode_utf8(s)) ++counts[cp];
  return counts;
}

std::string nfc_normalize(const std::string& utf8) {
  auto cps = decode_utf8(utf8);
  std::string out;
  out.reserve(utf8.size());
  const auto& table = composition_table();
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (i + 1 < cps.size()) {
      auto it = table.find((static_cast<std::uint64_t>(cps[i + 1]) << 21) | cps[i]);
      if (it != table.end()) {
        append_utf8(out, it->second);
        ++i;
        continue;
      }
    }
    append_utf8(out, cps[i]);
  }
  return out;
}

std::string strip_markup(const std::string& wikitext) {
  std::string s = strip_braces(wikitext, '{', '}', false);  // {{...}}
  s = strip_braces(s, '{', '}', true);                      // {| ... |}
  s = strip_tags(s);
  s = strip_links(s);
  s = strip_quotes_and_lists(s);
  return s;
}

DumpReader::DumpReader(std::istream& in, std::string lang)
    : in_(in), lang_(std::move(lang)) {}

bool DumpReader::refill() {
  if (!in_) return false;
  char chunk[kChunk];
  in_.read(chunk, sizeof chunk);
  std::streamsize got = in_.gcount();
  if (got <= 0) return false;
  buf_.append(chunk, static_cast<std::size_t>(got));
  return true;
}

std::optional<RawDocument> DumpReader::next() {
  // locate "<page"
  std::size_t start;
  while (true) {
    start = buf_.find("<page", buf_pos_);
    if (start != std::string::npos) break;
    // keep a tag-sized tail in case "<page" straddles a chunk boundary
    if (buf_.size() > buf_pos_ + 8) {
      std::size_t drop = buf_.size() - 8;
      offset_ += drop;
      buf_.erase(0, drop);
      buf_pos_ = 0;
    }
    if (!refill()) return std::nullopt;
  }
  std::size_t end;
  while (true) {
    end = buf_.find("</page>", start);
    if (end != std::string::npos) break;
    if (!refill())
      throw std::runtime_error(
          "malformed dump XML: unterminated <page> at byte offset " +
          std::to_string(offset_ + start));
  }
  std::string page = buf_.substr(start, end - start);
  std::uint64_t page_offset = offset_ + start;
  // discard everything up to and including this page
  std::size_t cut = end + 7;
  offset_ += cut;
  buf_.erase(0, cut);
  buf_pos_ = 0;

  auto element = [&](const char* open, const char* close,
                     std::string* out) -> bool {
    std::size_t a = page.find(open);
    if (a == std::string::npos) return false;
    a = page.find('>', a);
    if (a == std::string::npos) return false;
    std::size_t b = page.find(close, a + 1);
    if (b == std::string::npos) return false;
    *out = page.substr(a + 1, b - a - 1);
    return true;
  };

  RawDocument doc;
  doc.lang = lang_;
  std::string title, text;
  if (!element("<title", "</title>", &title))
    throw std::runtime_error(
        "malformed dump XML: page without <title> at byte offset " +
        std::to_string(page_offset));
  if (!element("<text", "</text>", &text))
    throw std::runtime_error(
        "malformed dump XML: page without <text> at byte offset " +
        std::to_string(page_offset));
  doc.title = unescape_entities(title);
  std::string raw_body = unescape_entities(text);
  raw_body = extract_interwiki(raw_body, doc.cross_links);
  doc.body = strip_markup(raw_body);
  char idbuf[32];
  std::snprintf(idbuf, sizeof idbuf, "%s_%06llu", lang_.c_str(),
                static_cast<unsigned long long>(doc_counter_++));
  doc.doc_id = idbuf;
  return doc;
}

std::vector<RawDocument> parse_dump(std::istream& in, const std::string& lang) {
  DumpReader reader(in, lang);
  std::vector<RawDocument> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  return docs;
}

std::vector<RawDocument> load_plain_directory(const std::string& root,
                                              const std::string& lang,
                                              std::size_t* skipped_out) {
  fs::path dir = fs::path(root) / lang;
  std::ifstream manifest(dir / "manifest.tsv");
  if (!manifest)
    throw std::runtime_error("cannot open manifest: " +
                             (dir / "manifest.tsv").string());
  std::vector<RawDocument> docs;
  std::size_t skipped = 0;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("manifest line without TAB: " + line);
    RawDocument doc;
    doc.doc_id = line.substr(0, tab);
    doc.title = line.substr(tab + 1);
    doc.lang = lang;
    std::ifstream body(dir / (doc.doc_id + ".txt"));
    if (!body) {
      ++skipped;  // unknown manifest entry
      continue;
    }
    std::ostringstream ss;
    ss << body.rdbuf();
    doc.body = ss.str();
    docs.push_back(std::move(doc));
  }
  if (skipped_out) *skipped_out = skipped;
  return docs;
}

std::vector<ComparableDocPair> load_manifest_pairs(
    const std::string& root, const std::vector<RawDocument>& src_docs,
    const std::vector<RawDocument>& tgt_docs) {
  std::ifstream pairs_file(fs::path(root) / "pairs.tsv");
  if (!pairs_file)
    throw std::runtime_error("cannot open pairs.tsv under " + root);
  std::unordered_map<std::string, const RawDocument*> src_by_id, tgt_by_id;
  for (const auto& d : src_docs) src_by_id[d.doc_id] = &d;
  for (const auto& d : tgt_docs) tgt_by_id[d.doc_id] = &d;
  std::vector<ComparableDocPair> out;
  std::string line;
  while (std::getline(pairs_file, line)) {
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("pairs.tsv line without TAB: " + line);
    auto s = src_by_id.find(line.substr(0, tab));
    auto t = tgt_by_id.find(line.substr(tab + 1));
    if (s == src_by_id.end() || t == tgt_by_id.end()) continue;
    out.push_back({*s->second, *t->second, LinkSource::ArchiveId});
  }
  return out;
}

std::vector<ComparableDocPair> pair_documents(
    const std::vector<RawDocument>& src_docs,
    const std::vector<RawDocument>& tgt_docs, PairingStats* stats) {
  PairingStats local;
  if (!stats) stats = &local;
  if (src_docs.empty() || tgt_docs.empty()) return {};
  const std::string& tgt_lang = tgt_docs.front().lang;

  std::unordered_map<std::string, std::size_t> tgt_by_title;
  for (std::size_t i = 0; i < tgt_docs.size(); ++i) {
    std::string key = nfc_normalize(tgt_docs[i].title);
    if (!tgt_by_title.emplace(key, i).second)
      throw std::runtime_error("duplicate title in target collection: " +
                               tgt_docs[i].title);
  }

  std::vector<std::size_t> order(src_docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return src_docs[a].doc_id < src_docs[b].doc_id;
  });

  std::unordered_set<std::size_t> used_tgt;
  std::vector<ComparableDocPair> out;
  for (std::size_t idx : order) {
    const RawDocument& src = src_docs[idx];
    for (const auto& [lang, title] : src.cross_links) {
      if (lang != tgt_lang) continue;
      auto it = tgt_by_title.find(nfc_normalize(title));
      if (it == tgt_by_title.end()) {
        ++stats->missing_link_targets;
        continue;
      }
      if (!used_tgt.insert(it->second).second) {
        ++stats->tgt_already_used;
        continue;
      }
      out.push_back({src, tgt_docs[it->second], LinkSource::Interwiki});
      break;
    }
  }
  return out;
}

std::vector<std::string> tokenize(const std::string& sentence) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_ascii_space(sentence[i])) ++i;
    if (i >= sentence.size()) break;
    std::size_t j = i;
    while (j < sentence.size() && !is_ascii_space(sentence[j])) ++j;
    std::string chunk = sentence.substr(i, j - i);
    i = j;

    auto cps = decode_utf8(chunk);
    std::size_t lo = 0, hi = cps.size();
    std::vector<char32_t> leading, trailing;
    while (lo < hi && is_edge_punct_cp(cps[lo])) leading.push_back(cps[lo++]);
    while (hi > lo && is_edge_punct_cp(cps[hi - 1])) {
      trailing.push_back(cps[hi - 1]);
      --hi;
    }
    for (char32_t cp : leading) {
      std::string t;
      append_utf8(t, cp);
      tokens.push_back(t);
    }
    if (hi > lo) {
      std::string word;
      for (std::size_t k = lo; k < hi; ++k) append_utf8(word, cps[k]);
      tokens.push_back(word);
    }
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
      std::string t;
      append_utf8(t, *it);
      tokens.push_back(t);
    }
  }
  return tokens;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

SentenceRecord make_sentence_record(const std::string& raw) {
  SentenceRecord rec;
  rec.raw = raw;
  rec.tokens = tokenize(raw);
  rec.char_counts = count_chars(raw);
  return rec;
}

std::vector<SentenceRecord> segment_and_tokenize(const std::string& body,
                                                 const TokenizerOptions& opts) {
  // newlines behave like spaces; segmentation is purely punctuation-driven
  std::string text;
  text.reserve(body.size());
  for (char c : body) text.push_back(is_ascii_space(c) ? ' ' : c);

  std::vector<SentenceRecord> out;
  auto flush = [&](std::size_t from, std::size_t to) {
    while (from < to && text[from] == ' ') ++from;
    while (to > from && text[to - 1] == ' ') --to;
    if (to <= from) return;
    std::string raw = text.substr(from, to - from);
    SentenceRecord rec = make_sentence_record(raw);
    if (rec.tokens.empty()) return;
    out.push_back(std::move(rec));
  };

  std::size_t sent_start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i;
    while (j + 1 < text.size() &&
           (text[j + 1] == '.' || text[j + 1] == '!' || text[j + 1] == '?'))
      ++j;
    std::size_t after = j + 1;
    if (after >= text.size()) {
      flush(sent_start, text.size());
      sent_start = text.size();
      i = j;
      continue;
    }
    if (text[after] != ' ') {
      i = j;
      continue;
    }
    std::size_t next = after;
    while (next < text.size() && text[next] == ' ') ++next;
    bool boundary = next >= text.size();
    if (!boundary) {
      auto cps = decode_utf8(text.substr(next, 4));
      boundary = !cps.empty() && is_uppercase_cp(cps[0]);
    }
    if (boundary && c == '.' && !opts.abbreviations.empty()) {
      // word directly before the period
      std::size_t w_end = i;
      std::size_t w_start = w_end;
      while (w_start > sent_start && text[w_start - 1] != ' ') --w_start;
      std::string word = text.substr(w_start, w_end - w_start);
      if (opts.abbreviations.count(word)) boundary = false;
    }
    if (boundary) {
      flush(sent_start, after);
      sent_start = next;
      i = next ? next - 1 : 0;
    } else {
      i = j;
    }
  }
  flush(sent_start, text.size());
  return out;
}

}  // namespace corpusmine
