#pragma once

// Paginated harvesting from a repository search API. The HTTP layer is an
// injected Transport; item-to-record mapping is driven by a HarvestMapping
// (JSON pointers into each API item) and then goes through record_from_json,
// the same construction path as file ingestion.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "oerq/json.hpp"

#include "oerq/error.hpp"
#include "oerq/ingestion.hpp"
#include "oerq/metadata.hpp"

namespace oerq {

struct HarvestConfig {
  std::string base_url;
  std::string query;
  std::size_t page_size = 50;
  std::size_t max_records = 1000;
  std::size_t retry_limit = 3;
  std::chrono::seconds request_timeout{30};
  std::chrono::milliseconds initial_backoff{500};
};

inline void validate(const HarvestConfig& c) {
  if (c.page_size == 0) throw Error("page_size must be at least 1");
  if (c.max_records == 0) throw Error("max_records must be at least 1");
}

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> params;
  std::chrono::seconds timeout{30};
};

// status 0 means the request never produced an HTTP response.
struct HttpResponse {
  int status = 0;
  std::string body;
  std::string error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const HttpRequest& request) = 0;
};

// Serves a fixed list of responses in order; used for offline runs.
class ScriptedTransport final : public Transport {
 public:
  explicit ScriptedTransport(std::vector<HttpResponse> responses) : responses_(std::move(responses)) {}

  // {"responses": [{"status": 200, "body": <json or string>}, ...]}
  static ScriptedTransport from_json(const json& j) {
    std::vector<HttpResponse> out;
    for (const auto& r : j.at("responses")) {
      HttpResponse resp;
      resp.status = r.value("status", 200);
      if (r.contains("body")) resp.body = r.at("body").is_string() ? r.at("body").get<std::string>() : r.at("body").dump();
      resp.error = r.value("error", std::string{});
      out.push_back(std::move(resp));
    }
    return ScriptedTransport(std::move(out));
  }

  HttpResponse get(const HttpRequest& request) override {
    requests_.push_back(request);
    if (next_ >= responses_.size()) return {0, {}, "transcript exhausted"};
    return responses_[next_++];
  }

  const std::vector<HttpRequest>& requests() const { return requests_; }

 private:
  std::vector<HttpResponse> responses_;
  std::vector<HttpRequest> requests_;
  std::size_t next_ = 0;
};

struct HarvestMapping {
  std::string query_param = "q";
  std::string offset_param = "offset";
  std::string size_param = "limit";
  std::string items_pointer = "/items";  // JSON pointer to the item array in a page
  std::map<std::string, std::string> fields;  // canonical key -> JSON pointer within an item
  bool verified = false;
};

// Best-effort defaults; the repository's response schema is not documented
// here, so `verified` stays false until checked against a live response.
inline HarvestMapping default_harvest_mapping() {
  HarvestMapping m;
  m.fields = {{"url", "/url"},
              {"title", "/title"},
              {"description", "/description"},
              {"material_type", "/material_type"},
              {"date_available", "/date_available"},
              {"date_issued", "/date_issued"},
              {"subjects", "/subjects"},
              {"level", "/level"},
              {"languages", "/languages"},
              {"time_required", "/time_required"},
              {"accessibilities", "/accessibilities"},
              {"quality_control", "/quality_control"}};
  return m;
}

inline HarvestMapping harvest_mapping_from_json(const json& j) {
  HarvestMapping m = default_harvest_mapping();
  m.query_param = j.value("query_param", m.query_param);
  m.offset_param = j.value("offset_param", m.offset_param);
  m.size_param = j.value("size_param", m.size_param);
  m.items_pointer = j.value("items_pointer", m.items_pointer);
  m.verified = j.value("verified", false);
  if (j.contains("fields")) {
    m.fields.clear();
    for (const auto& [key, ptr] : j.at("fields").items()) {
      bool known = false;
      for (auto k : canonical_keys()) known = known || k == key;
      if (!known) throw Error("harvest mapping names unknown field '" + key + "'");
      m.fields[key] = ptr.get<std::string>();
    }
  }
  return m;
}

inline json to_json(const HarvestMapping& m) {
  return {{"query_param", m.query_param}, {"offset_param", m.offset_param}, {"size_param", m.size_param},
          {"items_pointer", m.items_pointer}, {"fields", m.fields},           {"verified", m.verified}};
}

// Projects an API item onto canonical keys. Missing pointers map to absent.
inline json map_item(const json& item, const HarvestMapping& mapping) {
  if (!item.is_object()) throw Error("API item is not a JSON object");
  json out = json::object();
  for (const auto& [key, pointer] : mapping.fields) {
    const json::json_pointer ptr(pointer);
    if (item.contains(ptr)) out[key] = item.at(ptr);
  }
  return out;
}

struct HarvestReport {
  IngestReport ingest;
  std::size_t pages = 0;
  std::size_t requests = 0;
  std::size_t retries = 0;
  std::optional<std::string> error;  // set when harvesting stopped on a persistent failure

  bool ok() const { return !error.has_value(); }
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline void real_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

inline bool is_transient(const HttpResponse& r) { return r.status == 0 || r.status == 429 || r.status >= 500; }

inline HarvestReport harvest(const HarvestConfig& config, Transport& transport, const HarvestMapping& mapping = default_harvest_mapping(),
                             const Sleeper& sleep = real_sleep) {
  validate(config);
  HarvestReport out;
  out.ingest.source = config.base_url + "?" + mapping.query_param + "=" + config.query;
  std::size_t offset = 0;
  std::size_t item_index = 0;

  while (out.ingest.records.size() < config.max_records) {
    HttpRequest req{config.base_url,
                    {{mapping.query_param, config.query},
                     {mapping.offset_param, std::to_string(offset)},
                     {mapping.size_param, std::to_string(config.page_size)}},
                    config.request_timeout};

    HttpResponse resp;
    auto backoff = config.initial_backoff;
    for (std::size_t attempt = 0;; ++attempt) {
      resp = transport.get(req);
      ++out.requests;
      if (!is_transient(resp) || attempt >= config.retry_limit) break;
      ++out.retries;
      sleep(backoff);
      backoff *= 2;
    }
    if (resp.status < 200 || resp.status >= 300) {
      out.error = "request at offset " + std::to_string(offset) + " failed: " +
                  (resp.status == 0 ? resp.error : "HTTP " + std::to_string(resp.status)) +
                  (is_transient(resp) ? " (retries exhausted)" : "");
      break;
    }

    json page;
    try {
      page = json::parse(resp.body);
    } catch (const json::parse_error& e) {
      out.error = "response at offset " + std::to_string(offset) + " is not JSON: " + e.what();
      break;
    }
    const json::json_pointer items_ptr(mapping.items_pointer);
    if (!page.contains(items_ptr) || !page.at(items_ptr).is_array()) {
      out.error = "response at offset " + std::to_string(offset) + " has no item array at '" + mapping.items_pointer + "'";
      break;
    }
    const auto& items = page.at(items_ptr);
    ++out.pages;

    for (const auto& item : items) {
      if (out.ingest.records.size() >= config.max_records) break;
      ++item_index;
      std::vector<std::string> notes;
      try {
        out.ingest.records.push_back(normalized(record_from_json(map_item(item, mapping), &notes)));
        for (auto& n : notes) out.ingest.notes.push_back({item_index, std::move(n)});
      } catch (const std::exception& e) {
        out.ingest.rejected.push_back({item_index, std::string(e.what()) + "; raw item: " + item.dump()});
      }
    }
    if (items.size() < config.page_size) break;
    offset += items.size();
  }
  return out;
}

}  // namespace oerq
