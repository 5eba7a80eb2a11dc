#include "parkkw/corpus_model.hpp"

#include <algorithm>
#include <cstdlib>

#include "parkkw/errors.hpp"

#ifndef PARKKW_DATA_DIR
#define PARKKW_DATA_DIR "data"
#endif

namespace parkkw {

std::filesystem::path Resources::default_data_dir() {
  if (const char* env = std::getenv("PARKKW_DATA_DIR"); env && *env) return env;
  return PARKKW_DATA_DIR;
}

Resources Resources::load(const std::filesystem::path& data_dir) {
  return Resources{TextPipeline::load(data_dir), LanguageDetector::load(data_dir / "langprofiles")};
}

std::vector<Eigen::VectorXd> DomainModel::feature_matrix() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(arms.size());
  for (const auto& a : arms) out.push_back(a.features);
  return out;
}

long DomainModel::find_arm(const std::string& phrase) const {
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i].phrase == phrase) return static_cast<long>(i);
  }
  return -1;
}

const DomainModel* CorpusModel::find(const std::string& domain_id) const {
  const auto it = std::lower_bound(
      domains.begin(), domains.end(), domain_id,
      [](const DomainModel& d, const std::string& id) { return d.domain_id() < id; });
  return it != domains.end() && it->domain_id() == domain_id ? &*it : nullptr;
}

namespace {

std::string language_sample(const FieldedDocument& doc) {
  return doc.title + "\n" + doc.meta_description + "\n" + doc.headers + "\n" + doc.content;
}

}  // namespace

CorpusModel build_corpus_model(std::vector<DomainRecord> records, const Resources& resources,
                               Bm25fParams params) {
  std::sort(records.begin(), records.end(),
            [](const DomainRecord& a, const DomainRecord& b) { return a.domain_id < b.domain_id; });
  CorpusModel model;
  FieldLengthStats lengths;

  for (auto& record : records) {
    DomainModel dm;
    dm.record = std::move(record);
    try {
      dm.encoding = detect_encoding(dm.record);
      dm.doc = parse_fields(dm.record, dm.encoding, "");
      if (dm.doc.unusable()) throw Undetectable("all fields are empty");
      dm.doc.language = resources.detector.detect(language_sample(dm.doc)).code;
      const auto tokens = resources.pipeline.tokenize(dm.doc);
      dm.candidates = extract_candidates(tokens, model.idf);
      dm.field_lens = field_lengths(tokens);
      if (dm.candidates.empty()) throw Undetectable("no candidate keywords");
      dm.usable = true;
      model.idf = update_idf(std::move(model.idf), dm.candidates);
      lengths.add(dm.field_lens);
    } catch (const Error& e) {
      dm.usable = false;
      dm.unusable_reason = e.what();
      dm.candidates.clear();
    }
    model.domains.push_back(std::move(dm));
  }

  params.avg_field_len = lengths.averages();
  params.validate();
  model.params = params;
  for (auto& dm : model.domains) {
    if (!dm.usable) continue;
    for (auto& c : dm.candidates) c.df = model.idf.lookup(c.phrase);
    dm.arms = featurize(dm.candidates, dm.doc, dm.field_lens, model.params, model.idf);
  }
  return model;
}

std::shared_ptr<const CorpusModel> load_corpus_model(const std::filesystem::path& corpus_dir,
                                                     const Resources& resources,
                                                     Bm25fParams params) {
  return std::make_shared<const CorpusModel>(
      build_corpus_model(load_corpus(corpus_dir), resources, std::move(params)));
}

}  // namespace parkkw
