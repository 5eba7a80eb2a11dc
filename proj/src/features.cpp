#include "parkkw/features.hpp"

namespace parkkw {

Eigen::VectorXd raw_features(const Candidate& candidate, const FieldArray<int>& doc_field_lens,
                             const Bm25fParams& params, const IdfStore& idf) {
  Eigen::VectorXd x(kFeatureDim);
  x(0) = bm25f_score(candidate, doc_field_lens, params, idf);
  for (Field f : kAllFields) {
    x(1 + static_cast<Eigen::Index>(index_of(f))) = tfidf(candidate, f, idf);
  }
  x(kPosFeature) = candidate.head_pos == Pos::Noun || candidate.is_np_chunk ? 1.0 : 0.0;
  return x;
}

std::vector<CandidateArm> featurize(const std::vector<Candidate>& candidates,
                                    const FieldedDocument& doc,
                                    const FieldArray<int>& doc_field_lens,
                                    const Bm25fParams& params, const IdfStore& idf) {
  std::vector<CandidateArm> arms;
  arms.reserve(candidates.size());
  Eigen::VectorXd column_max = Eigen::VectorXd::Zero(kFeatureDim);
  for (const auto& c : candidates) {
    CandidateArm arm{c.phrase, c.surface, raw_features(c, doc_field_lens, params, idf),
                     doc.domain_id};
    column_max = column_max.cwiseMax(arm.features);
    arms.push_back(std::move(arm));
  }
  for (auto& arm : arms) {
    for (int j = 0; j < kPosFeature; ++j) {
      if (column_max(j) > 0) arm.features(j) /= column_max(j);
    }
  }
  return arms;
}

}  // namespace parkkw
