#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace parkkw {

// Append-only newline-delimited JSON. Without a path the log lives only in
// memory.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(const std::filesystem::path& path);

  // Writes and flushes one line; throws Error if the write fails.
  void append(const nlohmann::json& event);

  const std::vector<std::string>& lines() const { return lines_; }
  std::string text() const;
  const std::filesystem::path& path() const { return path_; }

  static std::vector<nlohmann::json> parse(std::string_view text);
  static std::vector<nlohmann::json> read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::vector<std::string> lines_;
};

}  // namespace parkkw
