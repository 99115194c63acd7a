/* Copyright 2026 The ConDec Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "condec/clients.hpp"

using namespace condec;
using namespace condec::clients;
using nlohmann::json;

namespace {

// In-process HTTP service; handlers are installed per test.
class FakeService {
 public:
  FakeService() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }

  httplib::Server& server() { return server_; }

  ServiceEndpoint Endpoint(Role role, std::string prefix = "") const {
    ServiceEndpoint e;
    e.base_url = "http://127.0.0.1:" + std::to_string(port_) + prefix;
    e.role = role;
    e.timeout = std::chrono::milliseconds(2000);
    e.retries = 2;
    e.initial_backoff = std::chrono::milliseconds(1);
    return e;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
ClientError CatchClient(Fn&& fn) {
  try {
    fn();
  } catch (const ClientError& e) {
    return e;
  }
  FAIL("expected a ClientError");
  return ClientError(ErrorCode::kInvalidArgument, "", 0);
}

}  // namespace

TEST_SUITE("clients") {

TEST_CASE("generate wire format") {
  FakeService svc;
  json seen;
  std::string auth;
  svc.server().Post("/v1/generate", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    CHECK(req.get_header_value("Content-Type") == "application/json");
    Reply(res, 200, {{"text", "sent1 & sent2 -> hypothesis;  \n"}});
  });
  auto ep = svc.Endpoint(Role::kGenerator);
  ep.bearer_token = "secret";
  RemoteGenerator gen(ep);
  CHECK(gen.Generate("$hypothesis$ = h ; caf\xc3\xa9", 32) == "sent1 & sent2 -> hypothesis;");
  CHECK(seen == json{{"prompt", "$hypothesis$ = h ; caf\xc3\xa9"}, {"max_tokens", 32}});
  CHECK(auth == "Bearer secret");
}

TEST_CASE("base url path prefix is kept") {
  FakeService svc;
  svc.server().Post("/api/v1/similarity", [&](const httplib::Request& req, httplib::Response& res) {
    const auto j = json::parse(req.body);
    CHECK(j.at("candidate") == "a");
    CHECK(j.at("reference") == "b");
    Reply(res, 200, {{"score", -0.25}});
  });
  RemoteScorer scorer(svc.Endpoint(Role::kScorer, "/api/"));
  CHECK(scorer.Similarity("a", "b") == -0.25);  // raw pass-through
}

TEST_CASE("check wire format and range validation") {
  FakeService svc;
  std::atomic<double> score{0.75};
  svc.server().Post("/v1/check", [&](const httplib::Request& req, httplib::Response& res) {
    const auto j = json::parse(req.body);
    CHECK(j.at("premises") == json::array({"p1", "p2"}));
    CHECK(j.at("conclusion") == "c");
    Reply(res, 200, {{"score", score.load()}});
  });
  RemoteChecker checker(svc.Endpoint(Role::kChecker));
  CHECK(checker.Check({"p1", "p2"}, "c") == 0.75);
  score = 1.5;
  CHECK(CatchClient([&] { checker.Check({"p1", "p2"}, "c"); }).code() == ErrorCode::kProtocolError);
  score = -0.01;
  CHECK(CatchClient([&] { checker.Check({"p1", "p2"}, "c"); }).code() == ErrorCode::kProtocolError);
}

TEST_CASE("malformed responses are protocol errors") {
  FakeService svc;
  svc.server().Post("/v1/generate", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("<html>", "text/html");
  });
  svc.server().Post("/v1/check", [](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200, {{"score", "high"}});
  });
  svc.server().Post("/v1/similarity", [](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200, {{"value", 1}});
  });
  RemoteGenerator gen(svc.Endpoint(Role::kGenerator));
  RemoteChecker checker(svc.Endpoint(Role::kChecker));
  RemoteScorer scorer(svc.Endpoint(Role::kScorer));
  CHECK(CatchClient([&] { gen.Generate("x", 1); }).code() == ErrorCode::kProtocolError);
  CHECK(CatchClient([&] { checker.Check({"a"}, "b"); }).code() == ErrorCode::kProtocolError);
  CHECK(CatchClient([&] { scorer.Similarity("a", "b"); }).code() == ErrorCode::kProtocolError);
}

TEST_CASE("5xx and 429 are retried with backoff") {
  FakeService svc;
  std::atomic<int> calls{0};
  svc.server().Post("/v1/generate", [&](const httplib::Request&, httplib::Response& res) {
    const int n = ++calls;
    if (n == 1) return Reply(res, 503, {{"error", "warming up"}});
    if (n == 2) return Reply(res, 429, {{"error", "slow down"}});
    Reply(res, 200, {{"text", "ok"}});
  });
  RemoteGenerator gen(svc.Endpoint(Role::kGenerator));
  CHECK(gen.Generate("x", 4) == "ok");
  CHECK(calls == 3);
}

TEST_CASE("retries are bounded") {
  FakeService svc;
  std::atomic<int> calls{0};
  svc.server().Post("/v1/generate", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    Reply(res, 500, {{"error", "model crashed"}});
  });
  RemoteGenerator gen(svc.Endpoint(Role::kGenerator));
  const auto e = CatchClient([&] { gen.Generate("x", 4); });
  CHECK(e.code() == ErrorCode::kBadStatus);
  CHECK(e.http_status() == 500);
  CHECK(e.attempts() == 3);
  CHECK(calls == 3);
  CHECK(std::string(e.what()).find("model crashed") != std::string::npos);
}

TEST_CASE("client errors are not retried") {
  FakeService svc;
  std::atomic<int> calls{0};
  svc.server().Post("/v1/generate", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    Reply(res, 400, {{"error", "prompt too long"}});
  });
  RemoteGenerator gen(svc.Endpoint(Role::kGenerator));
  const auto e = CatchClient([&] { gen.Generate("x", 4); });
  CHECK(e.code() == ErrorCode::kBadStatus);
  CHECK(e.http_status() == 400);
  CHECK(e.attempts() == 1);
  CHECK(calls == 1);
}

TEST_CASE("slow responses time out") {
  FakeService svc;
  std::atomic<int> calls{0};
  svc.server().Post("/v1/generate", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    Reply(res, 200, {{"text", "late"}});
  });
  auto ep = svc.Endpoint(Role::kGenerator);
  ep.timeout = std::chrono::milliseconds(100);
  ep.retries = 1;
  RemoteGenerator gen(ep);
  const auto e = CatchClient([&] { gen.Generate("x", 4); });
  CHECK(e.code() == ErrorCode::kTimeout);
  CHECK(e.attempts() == 2);
}

TEST_CASE("unreachable endpoints time out") {
  int port = 0;
  {
    FakeService probe;  // grab a free port, then release it
    port = std::stoi(probe.Endpoint(Role::kGenerator).base_url.substr(17));
  }
  ServiceEndpoint ep;
  ep.base_url = "http://127.0.0.1:" + std::to_string(port);
  ep.timeout = std::chrono::milliseconds(200);
  ep.retries = 1;
  ep.initial_backoff = std::chrono::milliseconds(1);
  RemoteGenerator gen(ep);
  const auto e = CatchClient([&] { gen.Generate("x", 4); });
  CHECK(e.code() == ErrorCode::kTimeout);
  CHECK(IsServiceError(e.code()));
}

TEST_CASE("endpoints from the environment") {
  ::setenv("CONDEC_GENERATOR_URL", "http://gen:1", 1);
  ::setenv("CONDEC_CHECKER_URL", "", 1);
  ::unsetenv("CONDEC_SCORER_URL");
  CHECK(EndpointFromEnv(Role::kGenerator) == "http://gen:1");
  CHECK(EndpointFromEnv(Role::kReasoner) == "http://gen:1");
  CHECK_FALSE(EndpointFromEnv(Role::kChecker));
  CHECK_FALSE(EndpointFromEnv(Role::kScorer));
  ::unsetenv("CONDEC_GENERATOR_URL");
  ::unsetenv("CONDEC_CHECKER_URL");
}

TEST_CASE("scripted generator replays, records and runs dry") {
  ScriptedGenerator gen(std::vector<std::string>{"a", "b  "});
  CHECK(gen.Generate("p1", 3) == "a");
  CHECK(gen.Generate("p2", 4) == "b");
  CHECK(gen.requests() == std::vector<GenerateRequest>{{"p1", 3}, {"p2", 4}});
  try {
    gen.Generate("p3", 5);
    FAIL("expected exhaustion");
  } catch (const ClientError& e) {
    CHECK(e.code() == ErrorCode::kScriptExhausted);
  }

  ScriptedGenerator strict(std::vector<ScriptedGenerator::Entry>{
      {"x", [](const GenerateRequest& r) { return r.prompt.starts_with("$hypothesis$"); }}});
  CHECK(CatchClient([&] { strict.Generate("nope", 1); }).code() == ErrorCode::kProtocolError);
}

TEST_CASE("mock checkers enforce the score range") {
  ScriptedChecker scripted({0.5, 1.2});
  CHECK(scripted.Check({"a"}, "b") == 0.5);
  CHECK(CatchClient([&] { scripted.Check({"a"}, "b"); }).code() == ErrorCode::kProtocolError);
  CHECK(scripted.requests().size() == 2);
  auto constant = MakeConstantChecker(-1.0);
  CHECK(CatchClient([&] { constant->Check({"a"}, "b"); }).code() == ErrorCode::kProtocolError);

  auto overlap = MakeOverlapChecker();
  CHECK(overlap->Check({"the sun", "a star"}, "the star") == 1.0);
  CHECK(overlap->Check({"the sun", "gravity"}, "the star") == 0.2);

  auto reasoner = MakeConjoiningReasoner();
  CHECK(reasoner->Generate("Because a and b.", 10) == "Therefore, a and b.");
}

TEST_CASE("shared wire-protocol examples") {
  // The same file is the contract for the model service.
  std::ifstream in(std::string(CONDEC_FIXTURES_DIR) + "/wire_protocol.json");
  REQUIRE(in);
  const json examples = json::parse(in);
  FakeService svc;
  json expected_request, reply;
  int status = 200;
  for (const char* route : {"/v1/generate", "/v1/check", "/v1/similarity"}) {
    svc.server().Post(route, [&](const httplib::Request& req, httplib::Response& res) {
      if (status == 200 && !expected_request.is_null()) CHECK(json::parse(req.body) == expected_request);
      Reply(res, status, reply);
    });
  }
  RemoteGenerator gen(svc.Endpoint(Role::kGenerator));
  RemoteChecker checker(svc.Endpoint(Role::kChecker));
  RemoteScorer scorer(svc.Endpoint(Role::kScorer));

  for (const auto& ex : examples.at("generate")) {
    expected_request = ex.at("request");
    reply = ex.at("response");
    CHECK(gen.Generate(expected_request.at("prompt"), expected_request.at("max_tokens")) ==
          reply.at("text").get<std::string>());
  }
  for (const auto& ex : examples.at("check")) {
    expected_request = ex.at("request");
    reply = ex.at("response");
    CHECK(checker.Check(expected_request.at("premises").get<std::vector<std::string>>(),
                        expected_request.at("conclusion")) == reply.at("score").get<double>());
  }
  for (const auto& ex : examples.at("similarity")) {
    expected_request = ex.at("request");
    reply = ex.at("response");
    CHECK(scorer.Similarity(expected_request.at("candidate"), expected_request.at("reference")) ==
          reply.at("score").get<double>());
  }
  expected_request = nullptr;
  for (const auto& ex : examples.at("errors")) {
    status = ex.at("status");
    reply = ex.at("body");
    const std::string route = ex.at("route");
    CAPTURE(route);
    const auto e = CatchClient([&] {
      if (route == "/v1/generate") gen.Generate("p", 1);
      else if (route == "/v1/check") checker.Check({"a"}, "b");
      else scorer.Similarity("a", "b");
    });
    CHECK(ErrorCodeName(e.code()) == ex.at("code").get<std::string>());
  }
}

}  // TEST_SUITE
