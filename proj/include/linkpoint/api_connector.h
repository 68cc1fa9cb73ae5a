// Copyright 2026 The Linkpoint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKPOINT_API_CONNECTOR_H_
#define LINKPOINT_API_CONNECTOR_H_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace linkpoint {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Network-level failure: timeout, refused connection, exhausted retries.
// HTTP error statuses are not transport errors.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kValuePlaceholder = "{value}";

using Headers = std::vector<std::pair<std::string, std::string>>;

struct ApiEndpoint {
  std::string name;
  std::string url_template;  // exactly one {value}
  std::string input_class;
  std::chrono::milliseconds rate_limit{0};
  std::chrono::milliseconds timeout{10000};
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{200};
  Headers headers;

  // Throws ConfigError when an invariant does not hold.
  void Validate() const;
};

struct ApiResponse {
  int status = 0;
  std::string body;
  std::string request_value;
  std::chrono::milliseconds latency{0};

  bool is_success() const { return status >= 200 && status < 300; }
};

struct HttpRequest {
  std::string url;
  Headers headers;
  std::chrono::milliseconds timeout{10000};
};

struct HttpReply {
  int status = 0;
  std::string body;
};

// Injectable wire layer; implementations must be safe for concurrent calls.
class Transport {
 public:
  virtual ~Transport() = default;
  // Throws TransportError on network failure.
  virtual HttpReply Get(const HttpRequest& request) = 0;
};

// HTTP(S) GET via cpp-httplib.
class HttpTransport : public Transport {
 public:
  HttpReply Get(const HttpRequest& request) override;
};

// RFC 3986 percent-encoding; unreserved characters pass through.
std::string PercentEncode(std::string_view value);
std::string PercentDecode(std::string_view value);

// Throws ConfigError for an empty value.
std::string BuildRequestUrl(const ApiEndpoint& endpoint, std::string_view value);

// Serializes callers in arrival order and spaces consecutive grants by at
// least `interval`.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds interval) : interval_(interval) {}
  void Acquire();

 private:
  std::chrono::milliseconds interval_;
  std::mutex mu_;
  std::condition_variable cv_;
  uint64_t next_ticket_ = 0;
  uint64_t serving_ = 0;
  bool has_last_ = false;
  std::chrono::steady_clock::time_point last_;
};

class ApiConnector {
 public:
  ApiConnector(ApiEndpoint endpoint, std::shared_ptr<Transport> transport);

  const ApiEndpoint& endpoint() const { return endpoint_; }

  // Rate-limited GET with exponential backoff on transport failures. Error
  // statuses are returned, not thrown.
  ApiResponse Fetch(std::string_view value);

  uint64_t requests_issued() const;

 private:
  ApiEndpoint endpoint_;
  std::shared_ptr<Transport> transport_;
  std::unique_ptr<RateLimiter> limiter_;
  mutable std::mutex stats_mu_;
  uint64_t requests_issued_ = 0;
};

}  // namespace linkpoint

#endif  // LINKPOINT_API_CONNECTOR_H_
