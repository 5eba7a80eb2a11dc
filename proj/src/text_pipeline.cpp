#include "parkkw/text_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "parkkw/errors.hpp"
#include "parkkw/porter_stemmer.hpp"
#include "parkkw/utf8.hpp"

namespace parkkw {

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "Noun";
    case Pos::Verb: return "Verb";
    case Pos::Adjective: return "Adjective";
    case Pos::Other: return "Other";
  }
  return "Other";
}

int Candidate::total_tf() const {
  return std::accumulate(per_field_tf.begin(), per_field_tf.end(), 0);
}

int IdfStore::lookup(const std::string& phrase) const {
  const auto it = df.find(phrase);
  return it == df.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// POS tagging

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

Pos parse_pos(std::string_view name) {
  if (name == "Noun") return Pos::Noun;
  if (name == "Verb") return Pos::Verb;
  if (name == "Adjective") return Pos::Adjective;
  return Pos::Other;
}

}  // namespace

PosTagger PosTagger::load(const std::filesystem::path& lexicon_tsv) {
  std::ifstream in(lexicon_tsv);
  if (!in) throw Error("cannot open tag lexicon " + lexicon_tsv.string());
  std::unordered_map<std::string, Pos> lexicon;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (line.empty() || line[0] == '#' || tab == std::string::npos) continue;
    lexicon.emplace(line.substr(0, tab), parse_pos(line.substr(tab + 1)));
  }
  return PosTagger(std::move(lexicon));
}

Pos PosTagger::tag(std::string_view lower, std::string_view stem, bool capitalized) const {
  if (auto it = lexicon_.find(std::string(lower)); it != lexicon_.end()) return it->second;
  if (auto it = lexicon_.find(std::string(stem)); it != lexicon_.end()) return it->second;
  for (std::string_view s : {"ness", "tion", "ment"}) {
    if (ends_with(lower, s)) return Pos::Noun;
  }
  for (std::string_view s : {"ize", "ate"}) {
    if (ends_with(lower, s)) return Pos::Verb;
  }
  for (std::string_view s : {"ous", "ful", "able"}) {
    if (ends_with(lower, s)) return Pos::Adjective;
  }
  return capitalized ? Pos::Noun : Pos::Other;
}

// ---------------------------------------------------------------------------
// Tokenization

TextPipeline TextPipeline::load(const std::filesystem::path& data_dir) {
  std::ifstream in(data_dir / "stopwords_en.txt");
  if (!in) throw Error("cannot open stopword list in " + data_dir.string());
  std::unordered_set<std::string> stopwords;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) stopwords.insert(line);
  }
  return TextPipeline(std::move(stopwords), PosTagger::load(data_dir / "lexicon_en.tsv"));
}

bool TextPipeline::is_stopword(std::string_view lower) const {
  return stopwords_.count(std::string(lower)) > 0;
}

std::vector<Token> TextPipeline::tokenize(const FieldedDocument& doc) const {
  if (doc.language != "en") {
    throw UnsupportedLanguage("no stopword list or tagger for language '" + doc.language + "'");
  }
  std::vector<Token> tokens;
  for (Field f : kAllFields) {
    auto field_tokens = tokenize_field(doc.field(f), f);
    tokens.insert(tokens.end(), std::make_move_iterator(field_tokens.begin()),
                  std::make_move_iterator(field_tokens.end()));
  }
  return tokens;
}

std::vector<Token> TextPipeline::tokenize_field(std::string_view text, Field field) const {
  std::vector<Token> tokens;
  const std::u32string cps = utf8::decode(text);
  const auto is_word_char = [](char32_t c) { return utf8::is_letter(c) || utf8::is_digit(c); };
  const auto is_apostrophe = [](char32_t c) { return c == '\'' || c == 0x2019; };

  int position = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_word_char(cps[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < cps.size() &&
           (is_word_char(cps[i]) ||
            (is_apostrophe(cps[i]) && i + 1 < cps.size() && utf8::is_letter(cps[i + 1]))))
      ++i;
    const std::u32string_view word(cps.data() + start, i - start);
    const int word_position = position++;

    bool all_digits = true;
    std::string lower;
    for (char32_t c : word) {
      if (!utf8::is_digit(c)) all_digits = false;
      utf8::append(lower, is_apostrophe(c) ? U'\'' : utf8::to_lower(c));
    }
    if (all_digits || is_stopword(lower)) continue;

    if (lower.size() > 2 && lower.compare(lower.size() - 2, 2, "'s") == 0) lower.resize(lower.size() - 2);
    std::erase(lower, '\'');
    if (lower.empty() || is_stopword(lower)) continue;

    Token tok;
    tok.stem = stem(lower);
    tok.pos = tagger_.tag(lower, tok.stem, utf8::is_upper(word.front()));
    tok.surface = std::move(lower);
    tok.field = field;
    tok.position = word_position;
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Candidates

namespace {

class CandidateBuilder {
 public:
  explicit CandidateBuilder(const IdfStore& idf) : idf_(idf) {}

  void add(const std::string& phrase, const std::string& surface, Field field, bool chunk,
           Pos head_pos) {
    auto [it, inserted] = index_.emplace(phrase, candidates_.size());
    if (inserted) {
      Candidate c;
      c.phrase = phrase;
      c.surface = surface;
      c.df = idf_.lookup(phrase);
      c.head_pos = head_pos;
      candidates_.push_back(std::move(c));
    }
    Candidate& c = candidates_[it->second];
    c.per_field_tf[index_of(field)] += 1;
    c.is_np_chunk = c.is_np_chunk || chunk;
  }

  std::vector<Candidate> take() { return std::move(candidates_); }

 private:
  const IdfStore& idf_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Candidate> candidates_;
};

// Marks, for each token, the index where its NP chunk starts (or -1). A chunk
// is a run of adjectives followed by a maximal run of nouns, with all tokens
// adjacent in the source text.
std::vector<long> chunk_starts(const std::vector<Token>& tokens, std::size_t begin,
                               std::size_t end) {
  std::vector<long> start(end - begin, -1);
  std::size_t j = begin;
  while (j < end) {
    const Pos p = tokens[j].pos;
    if (p != Pos::Adjective && p != Pos::Noun) {
      ++j;
      continue;
    }
    const std::size_t a = j;
    const auto adjacent = [&](std::size_t k) {
      return k == a || tokens[k].position == tokens[k - 1].position + 1;
    };
    while (j < end && adjacent(j) && tokens[j].pos == Pos::Adjective) ++j;
    const std::size_t nouns_begin = j;
    while (j < end && adjacent(j) && tokens[j].pos == Pos::Noun) ++j;
    if (j > nouns_begin) {
      for (std::size_t k = a; k < j; ++k) start[k - begin] = static_cast<long>(a);
    } else if (j == a) {
      ++j;
    }
  }
  return start;
}

}  // namespace

std::vector<Candidate> extract_candidates(const std::vector<Token>& tokens, const IdfStore& idf) {
  CandidateBuilder builder(idf);
  std::size_t field_begin = 0;
  while (field_begin < tokens.size()) {
    std::size_t field_end = field_begin;
    while (field_end < tokens.size() && tokens[field_end].field == tokens[field_begin].field)
      ++field_end;
    const auto starts = chunk_starts(tokens, field_begin, field_end);
    const Field field = tokens[field_begin].field;

    for (std::size_t k = field_begin; k < field_end; ++k) {
      const Token& tok = tokens[k];
      builder.add(tok.stem, tok.surface, field, false, tok.pos);
      const long chunk_start = starts[k - field_begin];
      if (chunk_start < 0 || tok.pos != Pos::Noun) continue;
      std::string phrase = tok.stem;
      std::string surface = tok.surface;
      for (std::size_t len = 2; len <= 3; ++len) {
        if (static_cast<long>(k) - static_cast<long>(len) + 1 < chunk_start) break;
        phrase = tokens[k - len + 1].stem + " " + phrase;
        surface = tokens[k - len + 1].surface + " " + surface;
        builder.add(phrase, surface, field, true, tok.pos);
      }
    }
    field_begin = field_end;
  }
  return builder.take();
}

IdfStore update_idf(IdfStore idf, const std::vector<Candidate>& candidates) {
  idf.doc_count += 1;
  std::unordered_set<std::string> distinct;
  for (const auto& c : candidates) {
    if (distinct.insert(c.phrase).second) idf.df[c.phrase] += 1;
  }
  return idf;
}

double idf_weight(int doc_count, int df) {
  const double n = doc_count;
  const double d = std::clamp(df, 0, std::max(doc_count, 0));
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double tfidf(const Candidate& candidate, Field field, const IdfStore& idf) {
  const int tf = candidate.per_field_tf[index_of(field)];
  if (tf == 0) return 0.0;
  return tf * idf_weight(idf.doc_count, idf.lookup(candidate.phrase));
}

FieldArray<int> field_lengths(const std::vector<Token>& tokens) {
  FieldArray<int> lens{};
  for (const auto& t : tokens) lens[index_of(t.field)] += 1;
  return lens;
}

}  // namespace parkkw
