#pragma once

#include <filesystem>
#include <memory>

#include "parkkw/corpus_model.hpp"

namespace parkkw::test {

inline std::filesystem::path data_dir() { return PARKKW_DATA_DIR; }
inline std::filesystem::path test_data() { return PARKKW_TEST_DATA_DIR; }

inline const Resources& resources() {
  static const Resources r = Resources::load(data_dir());
  return r;
}

inline std::shared_ptr<const CorpusModel> fixture_corpus() {
  static const auto corpus = load_corpus_model(test_data() / "corpus", resources());
  return corpus;
}

}  // namespace parkkw::test
