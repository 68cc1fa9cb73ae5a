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

#include <fmt/format.h>

#include "linkpoint/api_connector.h"

#ifdef LINKPOINT_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

namespace linkpoint {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // /path?query
};

SplitUrl Split(const std::string& url) {
  std::string rest = url;
  std::string scheme = "http";
  if (auto p = rest.find("://"); p != std::string::npos) {
    scheme = rest.substr(0, p);
    rest = rest.substr(p + 3);
  }
  auto slash = rest.find_first_of("/?");
  std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string target = slash == std::string::npos ? "/" : rest.substr(slash);
  if (!target.empty() && target[0] == '?') target = "/" + target;
  return {scheme + "://" + host, target};
}

}  // namespace

HttpReply HttpTransport::Get(const HttpRequest& request) {
  SplitUrl url = Split(request.url);
  std::unique_ptr<httplib::Client> owned;
  try {
    owned = std::make_unique<httplib::Client>(url.origin);
  } catch (const std::exception& e) {
    throw TransportError(fmt::format("GET {} failed: {}", request.url, e.what()));
  }
  httplib::Client& client = *owned;
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_follow_location(true);
  httplib::Headers headers;
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);
  httplib::Result result;
  try {
    result = client.Get(url.target, headers);
  } catch (const std::exception& e) {
    throw TransportError(fmt::format("GET {} failed: {}", request.url, e.what()));
  }
  if (!result) {
    throw TransportError(
        fmt::format("GET {} failed: {}", request.url, httplib::to_string(result.error())));
  }
  return HttpReply{result->status, result->body};
}

}  // namespace linkpoint
