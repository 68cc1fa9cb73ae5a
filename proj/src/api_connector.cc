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

#include "linkpoint/api_connector.h"

#include <algorithm>
#include <thread>

#include <fmt/format.h>

namespace linkpoint {

namespace {

size_t CountOccurrences(std::string_view haystack, std::string_view needle) {
  size_t n = 0;
  for (size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

void ApiEndpoint::Validate() const {
  if (CountOccurrences(url_template, kValuePlaceholder) != 1) {
    throw ConfigError(fmt::format("API '{}': url template must contain {} exactly once", name,
                                  kValuePlaceholder));
  }
  if (rate_limit.count() < 0) throw ConfigError(fmt::format("API '{}': rate_limit < 0", name));
  if (timeout.count() <= 0) throw ConfigError(fmt::format("API '{}': timeout must be > 0", name));
  if (max_retries < 0) throw ConfigError(fmt::format("API '{}': max_retries < 0", name));
}

std::string PercentEncode(std::string_view value) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(value.size() * 3);
  for (unsigned char c : value) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0x0F];
    }
  }
  return out;
}

std::string PercentDecode(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    if (value[i] == '%' && i + 2 < value.size()) {
      int hi = HexValue(value[i + 1]);
      int lo = HexValue(value[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += value[i];
  }
  return out;
}

std::string BuildRequestUrl(const ApiEndpoint& endpoint, std::string_view value) {
  if (value.empty()) throw ConfigError("cannot build a request for an empty value");
  size_t pos = endpoint.url_template.find(kValuePlaceholder);
  if (pos == std::string::npos) {
    throw ConfigError("url template lacks the " + std::string(kValuePlaceholder) + " placeholder");
  }
  std::string url = endpoint.url_template;
  url.replace(pos, kValuePlaceholder.size(), PercentEncode(value));
  return url;
}

void RateLimiter::Acquire() {
  std::unique_lock<std::mutex> lock(mu_);
  const uint64_t ticket = next_ticket_++;
  cv_.wait(lock, [&] { return serving_ == ticket; });
  if (has_last_ && interval_.count() > 0) {
    auto ready = last_ + interval_;
    // Later tickets are parked on serving_, so sleeping unlocked keeps order.
    lock.unlock();
    std::this_thread::sleep_until(ready);
    lock.lock();
  }
  last_ = std::chrono::steady_clock::now();
  has_last_ = true;
  ++serving_;
  cv_.notify_all();
}

ApiConnector::ApiConnector(ApiEndpoint endpoint, std::shared_ptr<Transport> transport)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
  endpoint_.Validate();
  if (!transport_) throw ConfigError("API '" + endpoint_.name + "' has no transport");
  limiter_ = std::make_unique<RateLimiter>(endpoint_.rate_limit);
}

uint64_t ApiConnector::requests_issued() const {
  std::lock_guard<std::mutex> lock(stats_mu_);
  return requests_issued_;
}

ApiResponse ApiConnector::Fetch(std::string_view value) {
  HttpRequest request{BuildRequestUrl(endpoint_, value), endpoint_.headers, endpoint_.timeout};
  if (std::none_of(request.headers.begin(), request.headers.end(),
                   [](const auto& h) { return h.first == "Accept"; })) {
    request.headers.emplace_back("Accept", "application/json");
  }
  std::string last_error;
  for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(endpoint_.retry_backoff * (1LL << std::min(attempt - 1, 20)));
    }
    limiter_->Acquire();
    {
      std::lock_guard<std::mutex> lock(stats_mu_);
      ++requests_issued_;
    }
    auto start = std::chrono::steady_clock::now();
    try {
      HttpReply reply = transport_->Get(request);
      auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start);
      if (reply.status < 100 || reply.status > 599) {
        throw TransportError(fmt::format("invalid HTTP status {}", reply.status));
      }
      return ApiResponse{reply.status, std::move(reply.body), std::string(value), latency};
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  throw TransportError(fmt::format("API '{}': {} attempts failed, last error: {}", endpoint_.name,
                                   endpoint_.max_retries + 1, last_error));
}

}  // namespace linkpoint
