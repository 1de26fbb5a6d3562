#include "fprisk/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "fprisk/error.hpp"
#include "fprisk/profile.hpp"

namespace fprisk {

namespace {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180 tokenizer. Accepts LF or CRLF line endings; a quoted field may
// span lines. Blank lines are dropped.
std::vector<CsvRow> tokenize(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();

  while (i < n) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool row_done = false;
    bool any_content = false;
    while (!row_done) {
      field.clear();
      if (i < n && text[i] == '"') {
        any_content = true;
        ++i;
        bool closed = false;
        while (i < n) {
          char c = text[i];
          if (c == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field.push_back('"');
              i += 2;
            } else {
              ++i;
              closed = true;
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
            ++i;
          }
        }
        if (!closed) {
          throw Error(ErrorCode::MalformedRow, "unterminated quoted field", row.line);
        }
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          throw Error(ErrorCode::MalformedRow, "unexpected character after closing quote",
                      row.line);
        }
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') {
            throw Error(ErrorCode::MalformedRow, "stray quote in unquoted field", row.line);
          }
          field.push_back(text[i]);
          ++i;
        }
        if (!field.empty()) any_content = true;
      }
      row.fields.push_back(field);
      if (i >= n) {
        row_done = true;
      } else if (text[i] == ',') {
        any_content = true;
        ++i;
      } else {
        if (text[i] == '\r') ++i;
        if (i < n && text[i] == '\n') ++i;
        ++line;
        row_done = true;
      }
    }
    if (any_content) rows.push_back(std::move(row));
  }
  return rows;
}

std::int64_t parse_count(const std::string& field, std::string_view name, std::size_t line) {
  std::int64_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::MalformedRow,
                "column '" + std::string(name) + "' is not an integer: '" + field + "'", line,
                std::string(name));
  }
  if (value < 0) {
    throw Error(ErrorCode::MalformedRow,
                "column '" + std::string(name) + "' is negative: " + field, line,
                std::string(name));
  }
  return value;
}

bool needs_quoting(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void write_field(std::ostringstream& out, std::string_view s) {
  if (!needs_quoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::vector<StudyRecord> parse_study_csv(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  auto rows = tokenize(bytes);
  if (rows.empty()) {
    throw Error(ErrorCode::MalformedRow, "missing header row", 1);
  }

  const auto& header = rows.front();
  std::string joined;
  for (std::size_t k = 0; k < header.fields.size(); ++k) {
    if (k) joined += ',';
    joined += header.fields[k];
  }
  if (joined != kStudyCsvHeader) {
    throw Error(ErrorCode::MalformedRow,
                "header must be '" + std::string(kStudyCsvHeader) + "', got '" + joined + "'",
                header.line);
  }
  if (rows.size() == 1) {
    throw Error(ErrorCode::EmptyDataset, "study file has no data rows");
  }

  std::vector<StudyRecord> records;
  records.reserve(rows.size() - 1);
  std::set<std::pair<Disease, std::string>> seen;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 7) {
      throw Error(ErrorCode::MalformedRow,
                  "expected 7 columns, found " + std::to_string(row.fields.size()), row.line);
    }
    StudyRecord rec;
    rec.study_id = row.fields[0];
    if (rec.study_id.empty()) {
      throw Error(ErrorCode::MalformedRow, "empty study_id", row.line, "study_id");
    }
    auto disease = parse_disease(row.fields[1]);
    if (!disease) {
      throw Error(ErrorCode::UnknownDisease, "unknown disease_id '" + row.fields[1] + "'",
                  row.line, "disease_id");
    }
    rec.disease = *disease;
    rec.tp = parse_count(row.fields[2], "tp", row.line);
    rec.fn = parse_count(row.fields[3], "fn", row.line);
    rec.tn = parse_count(row.fields[4], "tn", row.line);
    rec.fp = parse_count(row.fields[5], "fp", row.line);
    rec.source = row.fields[6];
    if (rec.total() <= 0) {
      throw Error(ErrorCode::MalformedRow, "study has zero subjects (tp+fn+tn+fp = 0)",
                  row.line);
    }
    if (!seen.emplace(rec.disease, rec.study_id).second) {
      throw Error(ErrorCode::DuplicateStudyId,
                  "duplicate study_id '" + rec.study_id + "' for " +
                      std::string(to_string(rec.disease)),
                  row.line, "study_id");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string write_study_csv(std::span<const StudyRecord> records) {
  std::ostringstream out;
  out << kStudyCsvHeader << '\n';
  for (const auto& r : records) {
    write_field(out, r.study_id);
    out << ',' << to_string(r.disease) << ',' << r.tp << ',' << r.fn << ',' << r.tn << ','
        << r.fp << ',';
    write_field(out, r.source);
    out << '\n';
  }
  return out.str();
}

bool ScheduleConfig::has_subpopulation(std::string_view id) const {
  return std::find(subpopulations.begin(), subpopulations.end(), id) != subpopulations.end();
}

const ScheduleEntry* ScheduleConfig::find(std::string_view subpopulation,
                                          Disease disease) const {
  for (const auto& e : entries) {
    if (e.disease == disease && e.subpopulation == subpopulation) return &e;
  }
  return nullptr;
}

namespace {

using nlohmann::json;

[[noreturn]] void config_error(ErrorCode code, const std::string& key, const std::string& msg) {
  throw Error(code, key + ": " + msg, 0, key);
}

const json& require(const json& obj, const char* field, const std::string& path) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    config_error(ErrorCode::MalformedConfig, path + "." + field, "missing required key");
  }
  return *it;
}

std::string require_string(const json& value, const std::string& path) {
  if (!value.is_string()) config_error(ErrorCode::MalformedConfig, path, "expected a string");
  return value.get<std::string>();
}

double require_number(const json& value, const std::string& path) {
  if (!value.is_number()) config_error(ErrorCode::MalformedConfig, path, "expected a number");
  return value.get<double>();
}

std::int64_t require_count(const json& value, const std::string& path) {
  if (!value.is_number_integer()) {
    config_error(ErrorCode::MalformedConfig, path, "expected an integer");
  }
  auto v = value.get<std::int64_t>();
  if (v < 0) config_error(ErrorCode::MalformedConfig, path, "must be non-negative");
  return v;
}

}  // namespace

ScheduleConfig parse_schedule_config(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedConfig, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    config_error(ErrorCode::MalformedConfig, "$", "top level must be an object");
  }

  ScheduleConfig config;
  config.version_label = require_string(require(doc, "version", "$"), "version");

  const auto& subpops = require(doc, "subpopulations", "$");
  if (!subpops.is_array()) config_error(ErrorCode::MalformedConfig, "subpopulations", "expected a list");
  const auto groups = schedule_groups();
  for (std::size_t k = 0; k < subpops.size(); ++k) {
    const std::string path = "subpopulations[" + std::to_string(k) + "]";
    auto id = require_string(subpops[k], path);
    if (std::find(groups.begin(), groups.end(), id) == groups.end()) {
      config_error(ErrorCode::UnknownSubpopulation, path, "unknown subpopulation '" + id + "'");
    }
    if (config.has_subpopulation(id)) {
      config_error(ErrorCode::MalformedConfig, path, "subpopulation '" + id + "' listed twice");
    }
    config.subpopulations.push_back(std::move(id));
  }

  const auto& diseases = require(doc, "diseases", "$");
  if (!diseases.is_array()) config_error(ErrorCode::MalformedConfig, "diseases", "expected a list");
  for (std::size_t k = 0; k < diseases.size(); ++k) {
    const std::string path = "diseases[" + std::to_string(k) + "]";
    auto id = require_string(diseases[k], path);
    auto d = parse_disease(id);
    if (!d) config_error(ErrorCode::UnknownDisease, path, "unknown disease '" + id + "'");
    if (std::find(config.diseases.begin(), config.diseases.end(), *d) != config.diseases.end()) {
      config_error(ErrorCode::MalformedConfig, path, "disease '" + id + "' listed twice");
    }
    config.diseases.push_back(*d);
  }

  const auto& entries = require(doc, "entries", "$");
  if (!entries.is_array()) config_error(ErrorCode::MalformedConfig, "entries", "expected a list");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string path = "entries[" + std::to_string(k) + "]";
    const auto& e = entries[k];
    if (!e.is_object()) config_error(ErrorCode::MalformedConfig, path, "expected an object");

    ScheduleEntry entry;
    entry.subpopulation = require_string(require(e, "subpopulation", path), path + ".subpopulation");
    if (!config.has_subpopulation(entry.subpopulation)) {
      config_error(ErrorCode::UnknownSubpopulation, path + ".subpopulation",
                   "'" + entry.subpopulation + "' is not listed under subpopulations");
    }
    auto disease_id = require_string(require(e, "disease", path), path + ".disease");
    auto d = parse_disease(disease_id);
    if (!d || std::find(config.diseases.begin(), config.diseases.end(), *d) == config.diseases.end()) {
      config_error(ErrorCode::UnknownDisease, path + ".disease",
                   "'" + disease_id + "' is not listed under diseases");
    }
    entry.disease = *d;

    const bool direct = e.contains("occasions");
    const bool derived = e.contains("start_age") || e.contains("end_age") || e.contains("interval_years");
    if (direct == derived) {
      config_error(ErrorCode::MalformedConfig, path,
                   "exactly one of 'occasions' or 'start_age'/'end_age'/'interval_years' is required");
    }
    if (direct) {
      entry.occasions = DirectCount{require_count(e["occasions"], path + ".occasions")};
    } else {
      AgeRange range;
      range.start_age = require_number(require(e, "start_age", path), path + ".start_age");
      range.end_age = require_number(require(e, "end_age", path), path + ".end_age");
      range.interval_years =
          require_number(require(e, "interval_years", path), path + ".interval_years");
      if (range.interval_years <= 0) {
        config_error(ErrorCode::InvalidDerivation, path + ".interval_years", "must be positive");
      }
      if (range.end_age < range.start_age) {
        config_error(ErrorCode::InvalidDerivation, path + ".end_age",
                     "end_age is before start_age");
      }
      entry.occasions = range;
    }
    if (e.contains("per_pregnancy_occasions")) {
      entry.per_pregnancy_occasions =
          require_count(e["per_pregnancy_occasions"], path + ".per_pregnancy_occasions");
    }

    if (config.find(entry.subpopulation, entry.disease) != nullptr) {
      config_error(ErrorCode::DuplicatePair, path,
                   "second entry for (" + entry.subpopulation + ", " + disease_id + ")");
    }
    config.entries.push_back(std::move(entry));
  }
  return config;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'", 0, path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<StudyRecord> load_study_csv(const std::filesystem::path& path) {
  return parse_study_csv(read_file(path));
}

ScheduleConfig load_schedule_config(const std::filesystem::path& path) {
  return parse_schedule_config(read_file(path));
}

}  // namespace fprisk
