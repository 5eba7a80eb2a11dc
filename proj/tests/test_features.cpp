#include <doctest.h>

#include <algorithm>
#include <random>

#include "parkkw/features.hpp"
#include "support.hpp"

using namespace parkkw;

namespace {

Candidate cand(std::string phrase, FieldArray<int> tf, Pos head, bool chunk = false) {
  Candidate c;
  c.phrase = phrase;
  c.surface = std::move(phrase);
  c.per_field_tf = tf;
  c.head_pos = head;
  c.is_np_chunk = chunk;
  return c;
}

FieldedDocument doc_of(std::string id) {
  FieldedDocument d;
  d.domain_id = std::move(id);
  d.language = "en";
  return d;
}

}  // namespace

TEST_SUITE("feature-extract") {

TEST_CASE("labels and dimension") {
  CHECK(kFeatureDim == 8);
  CHECK(kFeatureLabels.front() == "bm25f");
  CHECK(kFeatureLabels[kPosFeature] == "pos_indicator");
  CHECK(kFeatureLabels[3] == "tfidf_meta_keywords");
}

TEST_CASE("singleton normalizes to one or zero") {
  IdfStore idf;
  idf.doc_count = 3;
  idf.df["hotel"] = 1;
  const auto arms = featurize({cand("hotel", {0, 2, 0, 0, 1, 0}, Pos::Noun)}, doc_of("a.com"),
                              {4, 20, 0, 0, 3, 0}, Bm25fParams::defaults(), idf);
  REQUIRE(arms.size() == 1);
  const Eigen::VectorXd expected = (Eigen::VectorXd(8) << 1, 0, 1, 0, 0, 1, 0, 1).finished();
  CHECK(arms[0].features.isApprox(expected, 0));
  CHECK(arms[0].domain_id == "a.com");
  CHECK(arms[0].phrase == "hotel");
}

TEST_CASE("pos indicator rule") {
  IdfStore idf;
  idf.doc_count = 1;
  const FieldArray<int> lens{1, 1, 1, 1, 1, 1};
  const auto p = Bm25fParams::defaults();
  CHECK(raw_features(cand("hotel", {1, 0, 0, 0, 0, 0}, Pos::Noun), lens, p, idf)(kPosFeature) == 1);
  CHECK(raw_features(cand("book", {1, 0, 0, 0, 0, 0}, Pos::Verb), lens, p, idf)(kPosFeature) == 0);
  CHECK(raw_features(cand("cheap", {1, 0, 0, 0, 0, 0}, Pos::Adjective), lens, p, idf)(kPosFeature) == 0);
  CHECK(raw_features(cand("x y", {1, 0, 0, 0, 0, 0}, Pos::Other, true), lens, p, idf)(kPosFeature) == 1);
}

TEST_CASE("four-candidate document against hand recomputation") {
  // Weights 4,1,2,2,2,3; b = 0.75; k1 = 1.2; N = 4.
  auto params = Bm25fParams::defaults();
  params.avg_field_len = {2, 8, 1, 1, 3, 2};
  IdfStore idf;
  idf.doc_count = 4;
  idf.df = {{"hotel", 1}, {"book", 2}, {"room", 4}};
  const std::vector<Candidate> cs = {cand("hotel", {1, 2, 0, 0, 0, 0}, Pos::Noun),
                                     cand("book", {0, 1, 0, 0, 0, 0}, Pos::Verb),
                                     cand("cheap hotel", {1, 0, 0, 0, 0, 1}, Pos::Noun, true),
                                     cand("room", {0, 1, 0, 0, 2, 0}, Pos::Noun)};
  const auto arms = featurize(cs, doc_of("d.com"), {3, 10, 0, 0, 4, 2}, params, idf);
  const double expected[4][8] = {
      {0.4987618251846903, 0.5228787452803376, 1.0, 0.0, 0.0, 0.0, 0.0, 1},
      {0.14934525399475543, 0.0, 0.28785832124672245, 0.0, 0.0, 0.0, 0.0, 0},
      {1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1},
      {0.04244802386618479, 0.0, 0.04375535530340079, 0.0, 0.0, 1.0, 0.0, 1},
  };
  REQUIRE(arms.size() == 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 8; ++j) {
      INFO("arm " << i << " column " << j);
      CHECK(arms[i].features(j) == doctest::Approx(expected[i][j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("fixture corpus invariants") {
  for (const auto& dm : test::fixture_corpus()->domains) {
    if (!dm.usable) continue;
    REQUIRE_FALSE(dm.arms.empty());
    Eigen::VectorXd col_max = Eigen::VectorXd::Zero(kFeatureDim);
    std::vector<std::string> phrases;
    for (const auto& arm : dm.arms) {
      REQUIRE(arm.features.size() == kFeatureDim);
      CHECK(arm.features.minCoeff() >= 0.0);
      CHECK(arm.features.maxCoeff() <= 1.0);
      CHECK((arm.features(kPosFeature) == 0.0 || arm.features(kPosFeature) == 1.0));
      CHECK(arm.domain_id == dm.domain_id());
      col_max = col_max.cwiseMax(arm.features);
      phrases.push_back(arm.phrase);
    }
    for (int j = 0; j < kPosFeature; ++j) CHECK((col_max(j) == 0.0 || col_max(j) == 1.0));
    std::sort(phrases.begin(), phrases.end());
    CHECK(std::adjacent_find(phrases.begin(), phrases.end()) == phrases.end());
  }
}

TEST_CASE("deterministic and permutation-equivariant") {
  const auto corpus = test::fixture_corpus();
  std::mt19937_64 rng(5);
  for (const auto& dm : corpus->domains) {
    if (!dm.usable) continue;
    auto shuffled = dm.candidates;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto arms = featurize(shuffled, dm.doc, dm.field_lens, corpus->params, corpus->idf);
    for (const auto& arm : arms) {
      const long i = dm.find_arm(arm.phrase);
      REQUIRE(i >= 0);
      CHECK(arm.features == dm.arms[static_cast<std::size_t>(i)].features);
    }
    const auto again = featurize(dm.candidates, dm.doc, dm.field_lens, corpus->params, corpus->idf);
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].features == dm.arms[i].features);
  }
}

}  // TEST_SUITE
