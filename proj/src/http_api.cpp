#include "parkkw/http_api.hpp"

#include <httplib.h>

#include "parkkw/errors.hpp"

namespace parkkw {

int http_status_for(const std::exception& e) {
  if (dynamic_cast<const InvalidScore*>(&e) || dynamic_cast<const InvalidParams*>(&e) ||
      dynamic_cast<const nlohmann::json::exception*>(&e)) {
    return 400;
  }
  if (dynamic_cast<const AssessorFlagged*>(&e)) return 403;
  if (dynamic_cast<const UnknownTask*>(&e) || dynamic_cast<const UnknownIteration*>(&e) ||
      dynamic_cast<const UnknownDomain*>(&e)) {
    return 404;
  }
  if (dynamic_cast<const IterationAlreadyOpen*>(&e) || dynamic_cast<const NoOpenIteration*>(&e) ||
      dynamic_cast<const DuplicateJudgment*>(&e) || dynamic_cast<const TaskClosed*>(&e)) {
    return 409;
  }
  return 500;
}

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, {{"error", message}}, status);
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const std::exception& e) {
      send_error(res, http_status_for(e), e.what());
    }
  };
}

nlohmann::json parse_body(const httplib::Request& req) {
  nlohmann::json body = nlohmann::json::parse(req.body);
  if (!body.is_object()) throw InvalidParams("request body must be a JSON object");
  return body;
}

int parse_int(const std::string& text, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw InvalidParams(std::string("bad ") + what);
  return value;
}

}  // namespace

JudgeHttpServer::JudgeHttpServer(JudgeService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  register_routes();
}

JudgeHttpServer::~JudgeHttpServer() { stop(); }

void JudgeHttpServer::register_routes() {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  s.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  s.Post("/api/iterations", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto seed = body.value("seed", std::uint64_t{0});
    const auto m = body.value("m", std::int64_t{3});
    const double trap_rate = body.value("trap_rate", 0.1);
    if (m < 1) throw InvalidParams("m must be >= 1");
    const int id = service_.open_iteration(seed, static_cast<std::size_t>(m), trap_rate);
    send_json(res, {{"iteration_id", id}}, 201);
  }));

  s.Get("/api/tasks", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string assessor = req.get_param_value("assessor");
    if (assessor.empty()) throw InvalidParams("missing assessor parameter");
    int batch = 10;
    if (req.has_param("batch")) batch = parse_int(req.get_param_value("batch"), "batch");
    if (batch < 1) throw InvalidParams("batch must be >= 1");
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : service_.next_tasks(assessor, static_cast<std::size_t>(batch))) {
      out.push_back(t.to_json());
    }
    send_json(res, out);
  }));

  s.Get(R"(/api/snapshots/([^/]+))",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto [html, charset] = service_.snapshot(req.matches[1]);
          res.set_content(html, "text/html; charset=" + charset);
        }));

  s.Post("/api/judgments", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto& score = body.at("score");
    if (!score.is_number_integer()) throw InvalidScore("score must be an integer 0..5");
    const auto result = service_.submit_judgment(body.at("assessor_id").get<std::string>(),
                                                 body.at("task_id").get<std::string>(),
                                                 score.get<int>());
    send_json(res, {{"accepted", result.accepted}, {"flagged", result.flagged}});
  }));

  s.Post(R"(/api/iterations/(\d+)/close)",
         guarded([this](const httplib::Request& req, httplib::Response& res) {
           send_json(res, service_.close_iteration(parse_int(req.matches[1], "iteration")).to_json());
         }));

  s.Get(R"(/api/reports/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, service_.report(parse_int(req.matches[1], "iteration")).to_json());
  }));
}

int JudgeHttpServer::start(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void JudgeHttpServer::run(const std::string& host, int port) {
  if (!server_->listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

void JudgeHttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace parkkw
