#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "parkkw/bm25f.hpp"
#include "parkkw/features.hpp"
#include "parkkw/html_ingest.hpp"
#include "parkkw/language_detector.hpp"
#include "parkkw/text_pipeline.hpp"

namespace parkkw {

// Shipped NLP data: stopwords, tag lexicon, language profiles.
struct Resources {
  TextPipeline pipeline;
  LanguageDetector detector;

  // $PARKKW_DATA_DIR if set, else the data/ directory of the source tree.
  static std::filesystem::path default_data_dir();
  static Resources load(const std::filesystem::path& data_dir = default_data_dir());
};

struct DomainModel {
  DomainRecord record;
  FieldedDocument doc;
  bool usable = false;
  std::string unusable_reason;
  std::vector<Candidate> candidates;
  FieldArray<int> field_lens{};
  std::vector<CandidateArm> arms;
  std::string encoding;

  const std::string& domain_id() const { return record.domain_id; }
  std::vector<Eigen::VectorXd> feature_matrix() const;
  // Index of the arm with this phrase, or -1.
  long find_arm(const std::string& phrase) const;
};

// Every domain of a corpus run through ingest, text pipeline and
// featurization against the corpus-wide IDF and average field lengths.
struct CorpusModel {
  std::vector<DomainModel> domains;  // sorted by domain_id
  IdfStore idf;
  Bm25fParams params;  // avg_field_len filled from the corpus

  const DomainModel* find(const std::string& domain_id) const;
};

CorpusModel build_corpus_model(std::vector<DomainRecord> records, const Resources& resources,
                               Bm25fParams params = Bm25fParams::defaults());

std::shared_ptr<const CorpusModel> load_corpus_model(const std::filesystem::path& corpus_dir,
                                                     const Resources& resources,
                                                     Bm25fParams params = Bm25fParams::defaults());

}  // namespace parkkw
