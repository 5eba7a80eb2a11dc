#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "parkkw/bm25f.hpp"
#include "parkkw/html_ingest.hpp"
#include "parkkw/text_pipeline.hpp"

namespace parkkw {

inline constexpr int kFeatureDim = 8;

// Column order of every feature vector; also the labels used in reports.
inline constexpr std::array<std::string_view, kFeatureDim> kFeatureLabels = {
    "bm25f",          "tfidf_title",   "tfidf_content",         "tfidf_meta_keywords",
    "tfidf_meta_description", "tfidf_headers", "tfidf_anchors", "pos_indicator"};

inline constexpr int kPosFeature = 7;

struct CandidateArm {
  std::string phrase;
  std::string surface;
  Eigen::VectorXd features;  // kFeatureDim entries in [0, 1]
  std::string domain_id;
};

// Raw (unnormalized) features of one candidate.
Eigen::VectorXd raw_features(const Candidate& candidate, const FieldArray<int>& doc_field_lens,
                             const Bm25fParams& params, const IdfStore& idf);

// Raw features, then each continuous column divided by its maximum over the
// document's candidates. Columns that are zero everywhere stay zero.
std::vector<CandidateArm> featurize(const std::vector<Candidate>& candidates,
                                    const FieldedDocument& doc,
                                    const FieldArray<int>& doc_field_lens,
                                    const Bm25fParams& params, const IdfStore& idf);

}  // namespace parkkw
