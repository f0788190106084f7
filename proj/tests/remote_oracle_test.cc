// Copyright 2026 The chainattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chainattack/remote_oracle.h"

#include <atomic>
#include <thread>

#include "chainattack/error.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"

namespace chainattack {
namespace {

class StubServer : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/fixed", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      last_text_ = nlohmann::json::parse(req.body).at("text").get<std::string>();
      res.set_content(R"({"confidences": [0.3, 0.7]})", "application/json");
    });
    server_.Post("/missing", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"scores": [0.3, 0.7]})", "application/json");
    });
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("not json", "text/plain");
    });
    server_.Post("/error", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.status = 503;
    });
    server_.Post("/flaky", [this](const httplib::Request&, httplib::Response& res) {
      if (hits_++ == 0) {
        res.status = 500;
        return;
      }
      res.set_content(R"({"confidences": [0.9, 0.1]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  RemoteOracleConfig Config(const std::string& path) const {
    RemoteOracleConfig c;
    c.url = "http://127.0.0.1:" + std::to_string(port_) + path;
    c.timeout_seconds = 5.0;
    return c;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::string last_text_;
};

TEST_F(StubServer, PassesConfidencesThrough) {
  RemoteOracle oracle(Config("/fixed"));
  const Prediction p = oracle.Predict("服务好");
  EXPECT_EQ(p.label, 1);
  EXPECT_EQ(p.confidences, (std::vector<double>{0.3, 0.7}));
  EXPECT_EQ(last_text_, "服务好");
  oracle.Predict("again");
  EXPECT_EQ(oracle.query_count(), 2u);
  EXPECT_EQ(hits_, 2);
}

TEST_F(StubServer, MissingConfidencesIsProtocolError) {
  for (const std::string path : {"/missing", "/garbage"}) {
    RemoteOracle oracle(Config(path));
    try {
      oracle.Predict("x");
      FAIL() << path;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocol);
    }
  }
}

TEST_F(StubServer, ClassCountMismatchIsProtocolError) {
  RemoteOracleConfig c = Config("/fixed");
  c.class_names = {"a", "b", "c"};
  RemoteOracle oracle(c);
  try {
    oracle.Predict("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

TEST_F(StubServer, Non200IsUnavailableAfterRetries) {
  RemoteOracleConfig c = Config("/error");
  c.retry.max_attempts = 3;
  RemoteOracle oracle(c);
  try {
    oracle.Predict("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOracleUnavailable);
  }
  EXPECT_EQ(hits_, 3);
  EXPECT_EQ(oracle.query_count(), 3u);
}

TEST_F(StubServer, RetrySucceeds) {
  RemoteOracleConfig c = Config("/flaky");
  c.retry.max_attempts = 2;
  RemoteOracle oracle(c);
  EXPECT_EQ(oracle.Predict("x").label, 0);
  EXPECT_EQ(oracle.query_count(), 2u);
}

TEST(RemoteOracleTest, UnreachableEndpoint) {
  RemoteOracleConfig c;
  c.url = "http://127.0.0.1:1/predict";
  c.timeout_seconds = 1.0;
  RemoteOracle oracle(c);
  try {
    oracle.Predict("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOracleUnavailable);
  }
}

TEST(RemoteOracleTest, RejectsBadUrl) {
  RemoteOracleConfig c;
  c.url = "ftp://example";
  EXPECT_THROW(RemoteOracle{c}, Error);
}

}  // namespace
}  // namespace chainattack
