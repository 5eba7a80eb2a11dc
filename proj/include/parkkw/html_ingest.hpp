#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "parkkw/fields.hpp"

namespace parkkw {

// A parked domain as retrieved: raw page bytes plus out-of-band link data.
struct DomainRecord {
  std::string domain_id;
  std::string html_source;  // undecoded bytes
  std::vector<std::string> anchor_texts;
  std::vector<std::string> referrer_urls;
  std::int64_t fetched_at = 0;  // UTC seconds
};

// The page decomposed into scoring fields. Every text is UTF-8; absent fields
// are empty.
struct FieldedDocument {
  std::string domain_id;
  std::string title;
  std::string content;
  std::string meta_keywords;
  std::string meta_description;
  std::string headers;
  std::string anchors;
  std::string language;
  std::string encoding;

  const std::string& field(Field f) const;
  // True when all six fields are empty.
  bool unusable() const;
};

struct FetchOptions {
  bool allow_fetch = false;
  int timeout_ms = 5000;
};

// Reads a local file, or fetches an http(s) URL when options.allow_fetch is
// set. Throws FetchError or EmptyBody.
DomainRecord load_record(const std::string& path_or_url,
                         std::vector<std::string> anchors,
                         std::vector<std::string> referrers,
                         const FetchOptions& options = {});

// Precedence: byte-order mark, http-equiv Content-Type charset, meta charset,
// UTF-8 validity, ISO-8859-1. The returned name always decodes the bytes.
std::string detect_encoding(std::string_view bytes);
inline std::string detect_encoding(const DomainRecord& record) {
  return detect_encoding(record.html_source);
}

// Throws DecodeError when the bytes are not valid in `charset`.
std::string decode_to_utf8(std::string_view bytes, const std::string& charset);

// Lenient tag-soup extraction. Throws DecodeError only if decoding fails.
FieldedDocument parse_fields(const DomainRecord& record,
                             const std::string& encoding,
                             const std::string& language);

// Decodes character references (&amp;, &#233;, &#xE9;) in UTF-8 text.
std::string decode_entities(std::string_view text);

// corpus/<domain_id>/page.html + corpus/<domain_id>/meta.json, sorted by id.
std::vector<DomainRecord> load_corpus(const std::filesystem::path& dir);

}  // namespace parkkw
