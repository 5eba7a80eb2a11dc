#pragma once

#include <memory>
#include <string>
#include <thread>

#include "parkkw/judge_service.hpp"

namespace httplib {
class Server;
}

namespace parkkw {

// HTTP status for a service error: 400 invalid input, 403 flagged assessor,
// 404 unknown ids, 409 state conflicts, 500 otherwise.
int http_status_for(const std::exception& e);

// JSON API over a JudgeService, served by a background thread.
class JudgeHttpServer {
 public:
  explicit JudgeHttpServer(JudgeService& service);
  ~JudgeHttpServer();
  JudgeHttpServer(const JudgeHttpServer&) = delete;
  JudgeHttpServer& operator=(const JudgeHttpServer&) = delete;

  // Binds (port 0 picks a free port) and starts serving; returns the port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  // Blocks serving on the calling thread.
  void run(const std::string& host, int port);
  void stop();

 private:
  void register_routes();

  JudgeService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace parkkw
