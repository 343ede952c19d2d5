#pragma once

// Dataset parsing (JSON-lines and CSV) into validated OerRecord lists.
//
// Canonical keys: url, title, description, material_type, date_available,
// date_issued, subjects, level, languages, time_required, accessibilities,
// quality_control. List fields are JSON arrays; in CSV cells (and in JSON
// string values) list items are separated by '|'.

#include <cstddef>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oerq/json.hpp"

#include "oerq/error.hpp"
#include "oerq/metadata.hpp"
#include "oerq/text.hpp"

namespace oerq {

enum class DatasetFormat { JsonLines, Csv };

inline DatasetFormat parse_format_tag(std::string_view tag) {
  const auto t = text::to_lower_ascii(tag);
  if (t == "jsonl" || t == "json-lines" || t == "jsonlines" || t == "ndjson") return DatasetFormat::JsonLines;
  if (t == "csv") return DatasetFormat::Csv;
  throw Error("unknown dataset format '" + std::string(tag) + "' (expected jsonl or csv)");
}

struct IngestIssue {
  std::size_t index = 0;  // 1-based line (JSON-lines) or data row (CSV)
  std::string reason;

  friend bool operator==(const IngestIssue&, const IngestIssue&) = default;
};

struct IngestReport {
  std::vector<OerRecord> records;
  std::vector<IngestIssue> rejected;
  // Non-fatal per-field problems (for example an unparseable date).
  std::vector<IngestIssue> notes;
  std::string source;

  std::size_t total_entries() const { return records.size() + rejected.size(); }
};

inline const std::vector<std::string_view>& canonical_keys() {
  static const std::vector<std::string_view> keys = {
      "url",      "title",  "description", "material_type", "date_available",  "date_issued",
      "subjects", "level",  "languages",   "time_required", "accessibilities", "quality_control"};
  return keys;
}

namespace detail {

inline std::vector<std::string> split_list_cell(std::string_view cell) {
  std::vector<std::string> out;
  if (text::trim_view(cell).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto bar = cell.find('|', start);
    out.push_back(text::trim(cell.substr(start, bar == std::string_view::npos ? bar : bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

inline std::optional<std::string> scalar_text(const json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return text::trim(it->get_ref<const std::string&>());
  if (it->is_number() || it->is_boolean()) return it->dump();
  throw Error("field '" + std::string(key) + "' must be a string");
}

inline std::vector<std::string> list_text(const json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return split_list_cell(it->get_ref<const std::string&>());
  if (!it->is_array()) throw Error("field '" + std::string(key) + "' must be an array of strings");
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& item : *it) {
    if (item.is_string()) {
      out.push_back(text::trim(item.get_ref<const std::string&>()));
    } else if (item.is_number()) {
      out.push_back(item.dump());
    } else if (!item.is_null()) {
      throw Error("field '" + std::string(key) + "' must be an array of strings");
    }
  }
  return out;
}

}  // namespace detail

// Builds a record from a canonical-key JSON object. Every ingestion path
// (JSON-lines, CSV, harvester) goes through here. Throws Error on a malformed
// entry; unparseable dates degrade to absent and append to `notes`.
inline OerRecord record_from_json(const json& obj, std::vector<std::string>* notes = nullptr) {
  if (!obj.is_object()) throw Error("entry is not a JSON object");
  OerRecord r;
  r.url = detail::scalar_text(obj, "url").value_or("");
  r.title = detail::scalar_text(obj, "title").value_or("");
  r.description = detail::scalar_text(obj, "description").value_or("");
  r.material_type = detail::scalar_text(obj, "material_type").value_or("");
  r.subjects = detail::list_text(obj, "subjects");
  r.level = detail::scalar_text(obj, "level");
  r.languages = detail::list_text(obj, "languages");
  r.time_required = detail::scalar_text(obj, "time_required");
  r.accessibilities = detail::list_text(obj, "accessibilities");

  for (auto [key, slot] : {std::pair{"date_available", &r.date_available},
                           std::pair{"date_issued", &r.date_issued}}) {
    const auto raw = detail::scalar_text(obj, key);
    if (!raw || raw->empty()) continue;
    *slot = parse_iso_date(*raw);
    if (!*slot && notes) notes->push_back(std::string(key) + ": unparseable date '" + *raw + "'");
  }

  const auto qc = obj.find("quality_control");
  if (qc != obj.end() && qc->is_string()) r.quality_flag = parse_quality_flag(qc->get_ref<const std::string&>());
  return r;
}

inline json record_to_json(const OerRecord& r) {
  auto opt = [](const std::optional<std::string>& v) -> json { return v ? json(*v) : json(nullptr); };
  auto date = [](const std::optional<Date>& d) -> json { return d ? json(format_date(*d)) : json(nullptr); };
  json j = json::object();
  j["url"] = r.url;
  j["title"] = r.title;
  j["description"] = r.description;
  j["material_type"] = r.material_type;
  j["date_available"] = date(r.date_available);
  j["date_issued"] = date(r.date_issued);
  j["subjects"] = r.subjects;
  j["level"] = opt(r.level);
  j["languages"] = r.languages;
  j["time_required"] = opt(r.time_required);
  j["accessibilities"] = r.accessibilities;
  j["quality_control"] = r.quality_flag == QualityFlag::Unknown ? json(nullptr)
                                                                 : json(std::string(quality_flag_label(r.quality_flag)));
  return j;
}

inline void write_jsonl(std::ostream& out, const std::vector<OerRecord>& records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

inline std::string to_jsonl(const std::vector<OerRecord>& records) {
  std::ostringstream os;
  write_jsonl(os, records);
  return os.str();
}

// RFC-4180 CSV reader. Rows carry the 1-based line on which they start.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
  std::string error;  // non-empty when the row is malformed
};

inline std::vector<CsvRow> read_csv_rows(std::string_view data) {
  std::vector<CsvRow> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < data.size()) {
    CsvRow row;
    row.line = line;
    std::string cell;
    bool in_quotes = false;
    bool cell_was_quoted = false;
    bool row_done = false;
    while (pos < data.size() && !row_done) {
      const char c = data[pos];
      if (in_quotes) {
        if (c == '"') {
          if (pos + 1 < data.size() && data[pos + 1] == '"') {
            cell.push_back('"');
            pos += 2;
          } else {
            in_quotes = false;
            ++pos;
          }
        } else {
          if (c == '\n') ++line;
          cell.push_back(c);
          ++pos;
        }
        continue;
      }
      if (c == '"') {
        if (cell.empty() && !cell_was_quoted) {
          in_quotes = true;
          cell_was_quoted = true;
        } else if (row.error.empty()) {
          row.error = "stray quote inside unquoted cell";
        }
        ++pos;
      } else if (c == ',') {
        row.cells.push_back(std::move(cell));
        cell.clear();
        cell_was_quoted = false;
        ++pos;
      } else if (c == '\r' || c == '\n') {
        if (c == '\r' && pos + 1 < data.size() && data[pos + 1] == '\n') ++pos;
        ++pos;
        ++line;
        row_done = true;
      } else {
        cell.push_back(c);
        ++pos;
      }
    }
    if (in_quotes) row.error = "unterminated quoted cell";
    row.cells.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

inline bool is_blank_row(const CsvRow& row) {
  for (const auto& c : row.cells) {
    if (!text::trim_view(c).empty()) return false;
  }
  return true;
}

inline void ingest_entry(IngestReport& report, std::size_t index, const json& obj) {
  std::vector<std::string> notes;
  try {
    report.records.push_back(normalized(record_from_json(obj, &notes)));
    for (auto& n : notes) report.notes.push_back({index, std::move(n)});
  } catch (const Error& e) {
    report.rejected.push_back({index, e.what()});
  }
}

inline void parse_jsonl_into(IngestReport& report, std::string_view data) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= data.size()) {
    const auto nl = data.find('\n', pos);
    auto line = data.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? data.size() + 1 : nl + 1;
    if (text::trim_view(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      report.rejected.push_back({line_no, std::string("invalid JSON: ") + e.what()});
      continue;
    }
    ingest_entry(report, line_no, obj);
  }
}

inline void parse_csv_into(IngestReport& report, std::string_view data) {
  auto rows = read_csv_rows(data);
  std::size_t first = 0;
  while (first < rows.size() && is_blank_row(rows[first])) ++first;
  if (first == rows.size()) return;
  const auto& header_row = rows[first];
  if (!header_row.error.empty()) throw Error("malformed CSV header: " + header_row.error);

  std::vector<std::optional<std::string>> columns;
  for (const auto& h : header_row.cells) {
    const auto key = text::to_lower_ascii(text::trim_view(h));
    bool known = false;
    for (auto k : canonical_keys()) known = known || k == key;
    columns.push_back(known ? std::optional<std::string>(key) : std::nullopt);
  }

  std::size_t data_index = 0;
  for (std::size_t i = first + 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.error.empty() && is_blank_row(row)) continue;
    ++data_index;
    if (!row.error.empty()) {
      report.rejected.push_back({data_index, "line " + std::to_string(row.line) + ": " + row.error});
      continue;
    }
    if (row.cells.size() != columns.size()) {
      report.rejected.push_back({data_index, "line " + std::to_string(row.line) + ": expected " +
                                                 std::to_string(columns.size()) + " cells, found " +
                                                 std::to_string(row.cells.size())});
      continue;
    }
    json obj = json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (!columns[c] || text::trim_view(row.cells[c]).empty()) continue;
      obj[*columns[c]] = row.cells[c];
    }
    ingest_entry(report, data_index, obj);
  }
}

}  // namespace detail

// Parses a complete dataset. Malformed entries land in `rejected`; only an
// undecodable byte stream is fatal (throws Error).
inline IngestReport parse_dataset(std::string_view data, DatasetFormat format, std::string source = {}) {
  if (data.size() >= 3 && data.substr(0, 3) == "\xEF\xBB\xBF") data.remove_prefix(3);
  if (const auto bad = text::find_invalid_utf8(data)) {
    throw Error("input is not valid UTF-8 (byte offset " + std::to_string(*bad) + ")");
  }
  IngestReport report;
  report.source = std::move(source);
  if (format == DatasetFormat::JsonLines) {
    detail::parse_jsonl_into(report, data);
  } else {
    detail::parse_csv_into(report, data);
  }
  return report;
}

inline IngestReport parse_dataset(std::istream& in, DatasetFormat format, std::string source = {}) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_dataset(std::string_view(data), format, std::move(source));
}

inline json issues_to_json(const std::vector<IngestIssue>& issues) {
  json arr = json::array();
  for (const auto& i : issues) arr.push_back({{"index", i.index}, {"reason", i.reason}});
  return arr;
}

struct DatasetSummary {
  std::size_t total = 0;
  std::size_t with_control = 0;
  std::size_t without_control = 0;
  std::size_t unknown = 0;

  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

inline DatasetSummary dataset_summary(const std::vector<OerRecord>& records) {
  DatasetSummary s;
  s.total = records.size();
  for (const auto& r : records) {
    switch (r.quality_flag) {
      case QualityFlag::WithControl: ++s.with_control; break;
      case QualityFlag::WithoutControl: ++s.without_control; break;
      case QualityFlag::Unknown: ++s.unknown; break;
    }
  }
  return s;
}

inline json to_json(const DatasetSummary& s) {
  json j = json::object();
  j["total"] = s.total;
  j["with_control"] = s.with_control;
  j["without_control"] = s.without_control;
  j["unknown"] = s.unknown;
  return j;
}

}  // namespace oerq
