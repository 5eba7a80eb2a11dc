#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "parkkw/fields.hpp"
#include "parkkw/html_ingest.hpp"

namespace parkkw {

enum class Pos { Noun, Verb, Adjective, Other };

std::string_view pos_name(Pos pos);

struct Token {
  std::string surface;  // lowercase
  std::string stem;
  Pos pos = Pos::Other;
  Field field = Field::Content;
  int position = 0;  // word index in the field, counting removed words
};

// A candidate keyword: 1-3 stems joined by single spaces.
struct Candidate {
  std::string phrase;   // space-joined stems; the candidate's identity
  std::string surface;  // lowercased words of the first occurrence, for display
  FieldArray<int> per_field_tf{};
  bool is_np_chunk = false;
  int df = 0;
  Pos head_pos = Pos::Other;  // POS of the final token at first occurrence

  int total_tf() const;
};

// Corpus document frequencies. Value type: updates return a new store, so a
// reader holding a copy always sees a consistent snapshot.
struct IdfStore {
  int doc_count = 0;
  std::unordered_map<std::string, int> df;

  int lookup(const std::string& phrase) const;
};

// Lexicon lookup first (surface form, then stem), suffix rules for unknowns.
class PosTagger {
 public:
  static PosTagger load(const std::filesystem::path& lexicon_tsv);
  PosTagger() = default;
  explicit PosTagger(std::unordered_map<std::string, Pos> lexicon) : lexicon_(std::move(lexicon)) {}

  Pos tag(std::string_view lower, std::string_view stem, bool capitalized) const;
  std::size_t size() const { return lexicon_.size(); }

 private:
  std::unordered_map<std::string, Pos> lexicon_;
};

class TextPipeline {
 public:
  // Reads stopwords_en.txt and lexicon_en.tsv from `data_dir`.
  static TextPipeline load(const std::filesystem::path& data_dir);
  TextPipeline(std::unordered_set<std::string> stopwords, PosTagger tagger)
      : stopwords_(std::move(stopwords)), tagger_(std::move(tagger)) {}

  // Throws UnsupportedLanguage for anything but English.
  std::vector<Token> tokenize(const FieldedDocument& doc) const;
  std::vector<Token> tokenize_field(std::string_view text, Field field) const;

  bool is_stopword(std::string_view lower) const;
  std::size_t stopword_count() const { return stopwords_.size(); }
  const PosTagger& tagger() const { return tagger_; }

 private:
  std::unordered_set<std::string> stopwords_;
  PosTagger tagger_;
};

// Unigrams plus 2-3 word NP-chunk n-grams, deduplicated in order of first
// occurrence.
std::vector<Candidate> extract_candidates(const std::vector<Token>& tokens, const IdfStore& idf);

// Adds one document: doc_count + 1 and df + 1 for each distinct phrase.
IdfStore update_idf(IdfStore idf, const std::vector<Candidate>& candidates);

// ln(1 + (N - df + 0.5) / (df + 0.5)), df clamped to [0, N].
double idf_weight(int doc_count, int df);

// per_field_tf[field] * idf_weight(N, df).
double tfidf(const Candidate& candidate, Field field, const IdfStore& idf);

// Token counts per field after stopword removal.
FieldArray<int> field_lengths(const std::vector<Token>& tokens);

}  // namespace parkkw
