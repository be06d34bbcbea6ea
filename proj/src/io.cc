// Copyright 2026 The ppcard Authors
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


#include "ppcard/io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <boost/tokenizer.hpp>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"

namespace ppcard {
namespace {

using Json = nlohmann::json;

std::vector<std::string_view> Split(std::string_view text,
                                    std::string_view delim) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t end = text.find(delim, start);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, end - start));
    start = end + delim.size();
  }
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines = Split(text, "\n");
  for (std::string_view& l : lines) {
    if (l.ends_with('\r')) l.remove_suffix(1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  using Sep = boost::escaped_list_separator<char>;
  const std::string owned(line);
  try {
    boost::tokenizer<Sep> tok(owned, Sep('\\', ',', '"'));
    return std::vector<std::string>(tok.begin(), tok.end());
  } catch (const boost::escaped_list_error& e) {
    return absl::DataLossError(absl::StrCat("bad CSV line: ", e.what()));
  }
}

std::string CsvField(std::string_view v) {
  if (v.find_first_of(",\"\\\n\r") == std::string_view::npos) {
    return std::string(v);
  }
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Splits "key=value" and checks the key.
absl::StatusOr<std::string_view> Field(std::string_view part,
                                       std::string_view key) {
  if (!part.starts_with(key) || part.substr(key.size()).find('=') != 0) {
    return absl::DataLossError(
        absl::StrCat("expected '", std::string(key), "=' in header"));
  }
  return part.substr(key.size() + 1);
}

std::string OptionalCell(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

}  // namespace

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open '", path.string(), "'"));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::filesystem::path& path,
                       std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      return absl::PermissionDeniedError(absl::StrCat(
          "cannot create '", path.parent_path().string(), "': ", ec.message()));
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write '", path.string(), "'"));
  }
  return absl::OkStatus();
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

absl::StatusOr<RecordSchema> ParseSchemaJson(std::string_view text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("attributes") ||
      !j["attributes"].is_array()) {
    return absl::DataLossError("schema must be an object with an 'attributes' array");
  }
  std::vector<Attribute> attrs;
  for (const Json& a : j["attributes"]) {
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string()) {
      return absl::DataLossError("every schema attribute needs a string 'name'");
    }
    Attribute attr;
    attr.name = a["name"].get<std::string>();
    if (a.contains("kind")) {
      if (!a["kind"].is_string()) {
        return absl::DataLossError("schema 'kind' must be a string");
      }
      absl::StatusOr<AttributeKind> kind =
          ParseAttributeKind(a["kind"].get<std::string>());
      if (!kind.ok()) return absl::DataLossError(kind.status().message());
      attr.kind = *kind;
    }
    attrs.push_back(std::move(attr));
  }
  absl::StatusOr<RecordSchema> schema = RecordSchema::Create(std::move(attrs));
  if (!schema.ok()) return absl::DataLossError(schema.status().message());
  return schema;
}

std::string SchemaToJson(const RecordSchema& schema) {
  Json attrs = Json::array();
  for (const Attribute& a : schema.attributes()) {
    attrs.push_back({{"name", a.name}, {"kind", AttributeKindName(a.kind)}});
  }
  return Json{{"attributes", attrs}}.dump(2) + "\n";
}

absl::StatusOr<RecordSchema> ReadSchemaFile(const std::filesystem::path& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<RecordSchema> schema = ParseSchemaJson(*text);
  if (!schema.ok()) {
    return absl::DataLossError(
        absl::StrCat(path.string(), ": ", schema.status().message()));
  }
  return schema;
}

absl::StatusOr<std::vector<PlainRecord>> ParseRecordsCsv(
    std::string_view text, const RecordSchema& schema) {
  const std::vector<std::string_view> lines = Lines(text);
  if (lines.empty()) return absl::DataLossError("CSV has no header row");
  absl::StatusOr<std::vector<std::string>> header = SplitCsvLine(lines[0]);
  if (!header.ok()) return header.status();

  std::vector<int> column_of(schema.size(), -1);
  int id_column = -1;
  for (size_t c = 0; c < header->size(); ++c) {
    const std::string& name = (*header)[c];
    if (name == kEntityIdColumn) {
      id_column = static_cast<int>(c);
    } else if (std::optional<size_t> a = schema.IndexOf(name)) {
      if (column_of[*a] != -1) {
        return absl::DataLossError(absl::StrCat("column '", name, "' repeated"));
      }
      column_of[*a] = static_cast<int>(c);
    }
  }
  for (size_t a = 0; a < schema.size(); ++a) {
    if (column_of[a] < 0) {
      return absl::DataLossError(absl::StrCat(
          "CSV lacks a column for attribute '", schema.attributes()[a].name, "'"));
    }
  }

  std::vector<PlainRecord> records;
  for (size_t i = 1; i < lines.size(); ++i) {
    absl::StatusOr<std::vector<std::string>> row = SplitCsvLine(lines[i]);
    if (!row.ok()) {
      return absl::DataLossError(
          absl::StrCat("line ", i + 1, ": ", row.status().message()));
    }
    if (row->size() != header->size()) {
      return absl::DataLossError(absl::StrCat("line ", i + 1, ": expected ",
                                              header->size(), " fields, got ",
                                              row->size()));
    }
    PlainRecord rec;
    rec.values.reserve(schema.size());
    for (int c : column_of) rec.values.push_back((*row)[c]);
    if (id_column >= 0) rec.entity_id = (*row)[id_column];
    records.push_back(std::move(rec));
  }
  return records;
}

absl::StatusOr<std::vector<PlainRecord>> ReadRecordsCsv(
    const std::filesystem::path& path, const RecordSchema& schema) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<std::vector<PlainRecord>> records =
      ParseRecordsCsv(*text, schema);
  if (!records.ok()) {
    return absl::DataLossError(
        absl::StrCat(path.string(), ": ", records.status().message()));
  }
  return records;
}

std::string RecordsToCsv(std::span<const PlainRecord> records,
                         const RecordSchema& schema, bool with_entity_id) {
  std::vector<std::string> header;
  for (const Attribute& a : schema.attributes()) header.push_back(CsvField(a.name));
  if (with_entity_id) header.emplace_back(kEntityIdColumn);
  std::string out = absl::StrJoin(header, ",") + "\n";
  for (const PlainRecord& r : records) {
    std::vector<std::string> row;
    for (const std::string& v : r.values) row.push_back(CsvField(v));
    if (with_entity_id) row.push_back(CsvField(r.entity_id.value_or("")));
    absl::StrAppend(&out, absl::StrJoin(row, ","), "\n");
  }
  return out;
}

std::string ExchangeFileText(const EncodedDataset& dataset) {
  std::string out = absl::StrCat(
      "ppcard-bf v1, ell=", dataset.ell, ", epsilon=",
      FormatDouble(dataset.epsilon), ", provider=", dataset.provider_id,
      ", n=", dataset.filters.size(), "\n");
  for (const BloomFilter& bf : dataset.filters) {
    absl::StrAppend(&out, bf.ToHex(), "\n");
  }
  return out;
}

absl::StatusOr<EncodedDataset> ParseExchangeFile(std::string_view text) {
  const std::vector<std::string_view> lines = Lines(text);
  if (lines.empty()) return absl::DataLossError("empty exchange file");
  const std::vector<std::string_view> parts = Split(lines[0], ", ");
  if (parts.size() != 5 || parts[0] != "ppcard-bf v1") {
    return absl::DataLossError(
        "header must read 'ppcard-bf v1, ell=<l>, epsilon=<e>, "
        "provider=<id>, n=<count>'");
  }
  EncodedDataset ds;
  size_t n = 0;
  absl::StatusOr<std::string_view> ell = Field(parts[1], "ell");
  absl::StatusOr<std::string_view> eps = Field(parts[2], "epsilon");
  absl::StatusOr<std::string_view> provider = Field(parts[3], "provider");
  absl::StatusOr<std::string_view> count = Field(parts[4], "n");
  for (const auto* f : {&ell, &eps, &provider, &count}) {
    if (!f->ok()) return f->status();
  }
  if (!ParseNumber(*ell, ds.ell) || ds.ell == 0) {
    return absl::DataLossError(absl::StrCat("bad ell '", std::string(*ell), "'"));
  }
  if (!ParseNumber(*eps, ds.epsilon)) {
    return absl::DataLossError(
        absl::StrCat("bad epsilon '", std::string(*eps), "'"));
  }
  if (!ParseNumber(*count, n)) {
    return absl::DataLossError(absl::StrCat("bad n '", std::string(*count), "'"));
  }
  ds.provider_id = std::string(*provider);
  if (lines.size() - 1 != n) {
    return absl::DataLossError(absl::StrCat("header says n=", n, " but file has ",
                                            lines.size() - 1, " filters"));
  }
  ds.filters.reserve(n);
  for (size_t i = 1; i < lines.size(); ++i) {
    absl::StatusOr<BloomFilter> bf = BloomFilter::FromHex(lines[i], ds.ell);
    if (!bf.ok()) {
      return absl::DataLossError(
          absl::StrCat("line ", i + 1, ": ", bf.status().message()));
    }
    ds.filters.push_back(*std::move(bf));
  }
  return ds;
}

absl::StatusOr<EncodedDataset> ReadExchangeFile(
    const std::filesystem::path& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<EncodedDataset> ds = ParseExchangeFile(*text);
  if (!ds.ok()) {
    return absl::DataLossError(
        absl::StrCat(path.string(), ": ", ds.status().message()));
  }
  return ds;
}

std::string TruthFileText(std::string_view provider_id,
                          std::span<const std::string> entity_ids) {
  std::string out = absl::StrCat("ppcard-truth v1, provider=",
                                 std::string(provider_id),
                                 ", n=", entity_ids.size(), "\n");
  for (const std::string& id : entity_ids) absl::StrAppend(&out, id, "\n");
  return out;
}

absl::StatusOr<std::vector<std::string>> ParseTruthFile(
    std::string_view text, std::string_view expected_provider) {
  const std::vector<std::string_view> lines = Lines(text);
  if (lines.empty()) return absl::DataLossError("empty ground-truth file");
  const std::vector<std::string_view> parts = Split(lines[0], ", ");
  if (parts.size() != 3 || parts[0] != "ppcard-truth v1") {
    return absl::DataLossError(
        "header must read 'ppcard-truth v1, provider=<id>, n=<count>'");
  }
  absl::StatusOr<std::string_view> provider = Field(parts[1], "provider");
  absl::StatusOr<std::string_view> count = Field(parts[2], "n");
  if (!provider.ok()) return provider.status();
  if (!count.ok()) return count.status();
  size_t n = 0;
  if (!ParseNumber(*count, n) || lines.size() - 1 != n) {
    return absl::DataLossError("ground-truth count does not match its header");
  }
  if (!expected_provider.empty() && *provider != expected_provider) {
    return absl::DataLossError(absl::StrCat(
        "ground truth is for provider '", std::string(*provider),
        "', expected '", std::string(expected_provider), "'"));
  }
  return std::vector<std::string>(lines.begin() + 1, lines.end());
}

std::string SweepCsv(const PuritySweep& sweep) {
  std::string out = "k,Purity_k,silhouette,CH,inertia\n";
  for (const SweepEntry& e : sweep.entries) {
    absl::StrAppend(&out, e.k, ",", FormatDouble(e.purity), ",",
                    OptionalCell(e.silhouette), ",",
                    OptionalCell(e.calinski_harabasz), ",",
                    FormatDouble(e.inertia), "\n");
  }
  return out;
}

std::string TheoryCsv(std::span<const TheoryPoint> points) {
  std::string out = "epsilon,r,r_frac,p_closed,p_mc,mu,sigma\n";
  for (const TheoryPoint& p : points) {
    absl::StrAppend(&out, FormatDouble(p.epsilon), ",", FormatDouble(p.r), ",",
                    FormatDouble(p.r_frac), ",", FormatDouble(p.p_closed), ",",
                    OptionalCell(p.p_mc), ",", FormatDouble(p.mu), ",",
                    FormatDouble(p.sigma), "\n");
  }
  return out;
}

}  // namespace ppcard
