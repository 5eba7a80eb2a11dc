#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "parkkw/fields.hpp"
#include "parkkw/text_pipeline.hpp"

namespace parkkw {

struct Bm25fParams {
  FieldArray<double> field_weights{};
  FieldArray<double> field_b{};
  double k1 = 1.2;
  FieldArray<double> avg_field_len{};

  // title 4, content 1, meta keywords/description 2, headers 2, anchors 3;
  // b = 0.75 everywhere, k1 = 1.2, unit average lengths.
  static Bm25fParams defaults();

  // `key = value` lines: k1, weight.<field>, b.<field>. '#' starts a comment.
  // Keys not present keep their default. Throws InvalidParams.
  static Bm25fParams load(const std::filesystem::path& file);
  static Bm25fParams parse(const std::string& text);

  // Throws InvalidParams (k1 <= 0, b outside [0,1], negative or all-zero
  // weights, non-positive average lengths).
  void validate() const;
};

// Running per-field mean document length over the corpus.
class FieldLengthStats {
 public:
  void add(const FieldArray<int>& lens);
  // Mean length, or 1 for fields no document has used yet.
  double average(Field f) const;
  FieldArray<double> averages() const;
  int documents() const { return docs_; }

 private:
  FieldArray<double> sums_{};
  int docs_ = 0;
};

// Field-weighted pseudo term frequency before saturation.
double bm25f_weighted_tf(const Candidate& candidate, const FieldArray<int>& doc_field_lens,
                         const Bm25fParams& params);

double bm25f_score(const Candidate& candidate, const FieldArray<int>& doc_field_lens,
                   const Bm25fParams& params, const IdfStore& idf);

struct ScoredPhrase {
  std::string phrase;
  double score = 0.0;
};

// Descending by score, ties by candidate order; min(top_m, |candidates|) rows.
std::vector<ScoredPhrase> rank_bm25f(const std::vector<Candidate>& candidates,
                                     const FieldArray<int>& doc_field_lens,
                                     const Bm25fParams& params, const IdfStore& idf,
                                     std::size_t top_m);

}  // namespace parkkw
