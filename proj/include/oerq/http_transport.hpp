#pragma once

// cpp-httplib backed Transport for live harvesting.

#include <string>

#include "httplib.h"

#include "oerq/harvester.hpp"

namespace oerq {

class HttplibTransport final : public Transport {
 public:
  HttpResponse get(const HttpRequest& request) override {
    const auto scheme_end = request.url.find("://");
    const auto path_start = request.url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string origin = request.url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

    httplib::Params params;
    for (const auto& [k, v] : request.params) params.emplace(k, v);

    try {
      httplib::Client client(origin);
      client.set_connection_timeout(request.timeout);
      client.set_read_timeout(request.timeout);
      client.set_follow_location(true);
      auto res = client.Get(path, params, httplib::Headers{{"Accept", "application/json"}});
      if (!res) return {0, {}, httplib::to_string(res.error())};
      return {res->status, res->body, {}};
    } catch (const std::exception& e) {
      return {0, {}, e.what()};
    }
  }
};

}  // namespace oerq
