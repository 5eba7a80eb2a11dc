#include "parkkw/bm25f.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "parkkw/errors.hpp"

namespace parkkw {

Bm25fParams Bm25fParams::defaults() {
  Bm25fParams p;
  p.field_weights = {4.0, 1.0, 2.0, 2.0, 2.0, 3.0};
  p.field_b.fill(0.75);
  p.k1 = 1.2;
  p.avg_field_len.fill(1.0);
  return p;
}

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, std::string value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    value = value.substr(1, value.size() - 2);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InvalidParams("bad number for " + key + ": '" + value + "'");
  }
  return v;
}

}  // namespace

Bm25fParams Bm25fParams::parse(const std::string& text) {
  Bm25fParams p = defaults();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = strip(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidParams("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = strip(line.substr(0, eq));
    const double value = parse_number(key, strip(line.substr(eq + 1)));
    if (key == "k1") {
      p.k1 = value;
      continue;
    }
    const auto dot = key.find('.');
    const auto field = dot == std::string::npos ? std::nullopt : parse_field(key.substr(dot + 1));
    if (!field) throw InvalidParams("unknown key '" + key + "'");
    const std::string group = key.substr(0, dot);
    if (group == "weight") p.field_weights[index_of(*field)] = value;
    else if (group == "b") p.field_b[index_of(*field)] = value;
    else throw InvalidParams("unknown key '" + key + "'");
  }
  p.validate();
  return p;
}

Bm25fParams Bm25fParams::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InvalidParams("cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Bm25fParams::validate() const {
  if (!(k1 > 0)) throw InvalidParams("k1 must be > 0");
  bool any_positive = false;
  for (Field f : kAllFields) {
    const std::size_t i = index_of(f);
    const std::string name(field_name(f));
    if (!(field_weights[i] >= 0)) throw InvalidParams("weight." + name + " must be >= 0");
    if (!(field_b[i] >= 0 && field_b[i] <= 1)) throw InvalidParams("b." + name + " outside [0,1]");
    if (!(avg_field_len[i] > 0)) throw InvalidParams("average length of " + name + " must be > 0");
    any_positive = any_positive || field_weights[i] > 0;
  }
  if (!any_positive) throw InvalidParams("at least one field weight must be > 0");
}

void FieldLengthStats::add(const FieldArray<int>& lens) {
  for (std::size_t i = 0; i < kFieldCount; ++i) sums_[i] += lens[i];
  ++docs_;
}

double FieldLengthStats::average(Field f) const {
  const double s = sums_[index_of(f)];
  return docs_ == 0 || s <= 0 ? 1.0 : s / docs_;
}

FieldArray<double> FieldLengthStats::averages() const {
  FieldArray<double> out{};
  for (Field f : kAllFields) out[index_of(f)] = average(f);
  return out;
}

double bm25f_weighted_tf(const Candidate& candidate, const FieldArray<int>& doc_field_lens,
                         const Bm25fParams& params) {
  double weighted = 0.0;
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    const int tf = candidate.per_field_tf[i];
    if (tf == 0 || params.field_weights[i] == 0) continue;
    const double norm =
        1.0 + params.field_b[i] * (doc_field_lens[i] / params.avg_field_len[i] - 1.0);
    weighted += params.field_weights[i] * tf / norm;
  }
  return weighted;
}

double bm25f_score(const Candidate& candidate, const FieldArray<int>& doc_field_lens,
                   const Bm25fParams& params, const IdfStore& idf) {
  params.validate();
  const double t = bm25f_weighted_tf(candidate, doc_field_lens, params);
  if (t <= 0) return 0.0;
  return t / (params.k1 + t) * idf_weight(idf.doc_count, idf.lookup(candidate.phrase));
}

std::vector<ScoredPhrase> rank_bm25f(const std::vector<Candidate>& candidates,
                                     const FieldArray<int>& doc_field_lens,
                                     const Bm25fParams& params, const IdfStore& idf,
                                     std::size_t top_m) {
  std::vector<ScoredPhrase> scored;
  scored.reserve(candidates.size());
  for (const auto& c : candidates) {
    scored.push_back({c.phrase, bm25f_score(c, doc_field_lens, params, idf)});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredPhrase& a, const ScoredPhrase& b) { return a.score > b.score; });
  scored.resize(std::min(top_m, scored.size()));
  return scored;
}

}  // namespace parkkw
