#include "parkkw/event_log.hpp"

#include <sstream>

#include "parkkw/errors.hpp"

namespace parkkw {

EventLog::EventLog(const std::filesystem::path& path) : path_(path) {
  if (path_.empty()) return;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) lines_.push_back(line);
    }
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open event log " + path_.string());
}

void EventLog::append(const nlohmann::json& event) {
  std::string line = event.dump();
  if (out_.is_open()) {
    out_ << line << '\n';
    out_.flush();
    if (!out_) throw Error("write to event log " + path_.string() + " failed");
  }
  lines_.push_back(std::move(line));
}

std::string EventLog::text() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

std::vector<nlohmann::json> EventLog::parse(std::string_view text) {
  std::vector<nlohmann::json> events;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      events.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error("event log line " + std::to_string(number) + ": " + e.what());
    }
  }
  return events;
}

std::vector<nlohmann::json> EventLog::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read event log " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace parkkw
