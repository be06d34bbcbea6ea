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

#include "ppcard/encoding.h"

#include <sodium.h>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "ppcard/random.h"

namespace ppcard {
namespace {

using SipKey = std::array<unsigned char, crypto_shorthash_KEYBYTES>;

SipKey KeyFromSeed(uint64_t seed) {
  SipKey key{};
  const uint64_t lo = DeriveSeed(seed, 0);
  const uint64_t hi = DeriveSeed(seed, 1);
  for (int i = 0; i < 8; ++i) {
    key[i] = static_cast<unsigned char>(lo >> (8 * i));
    key[8 + i] = static_cast<unsigned char>(hi >> (8 * i));
  }
  return key;
}

uint64_t KeyedHash(std::string_view token, const SipKey& key) {
  std::array<unsigned char, crypto_shorthash_BYTES> out{};
  crypto_shorthash(out.data(),
                   reinterpret_cast<const unsigned char*>(token.data()),
                   token.size(), key.data());
  uint64_t h = 0;
  for (int i = 0; i < 8; ++i) h |= static_cast<uint64_t>(out[i]) << (8 * i);
  return h;
}

// Number of decimals needed to print `step` exactly (capped at 9).
int StepDecimals(double step) {
  double scaled = step;
  for (int d = 0; d < 9; ++d) {
    if (std::fabs(scaled - std::round(scaled)) <=
        1e-9 * std::max(1.0, std::fabs(scaled))) {
      return d;
    }
    scaled *= 10.0;
  }
  return 9;
}

std::string RenderFixed(double v, int decimals) {
  std::string s = absl::StrFormat("%.*f", decimals, v);
  // "-0" and "-0.00" are the same grid point as "0".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

}  // namespace

absl::Status EncodingParams::Validate() const {
  if (q < 1) return absl::InvalidArgumentError("q must be >= 1");
  if (ell < 1) return absl::InvalidArgumentError("ell must be >= 1");
  if (num_hashes < 1) {
    return absl::InvalidArgumentError("num_hashes must be >= 1");
  }
  if (!(numeric_interval >= 0)) {
    return absl::InvalidArgumentError("numeric_interval must be >= 0");
  }
  if (!(numeric_step > 0)) {
    return absl::InvalidArgumentError("numeric_step must be > 0");
  }
  return absl::OkStatus();
}

std::string_view AttributeKindName(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::kString:
      return "string";
    case AttributeKind::kNumeric:
      return "numeric";
    case AttributeKind::kCategorical:
      return "categorical";
  }
  return "string";
}

absl::StatusOr<AttributeKind> ParseAttributeKind(std::string_view name) {
  if (name == "string") return AttributeKind::kString;
  if (name == "numeric") return AttributeKind::kNumeric;
  if (name == "categorical") return AttributeKind::kCategorical;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown attribute kind '", std::string(name), "'"));
}

absl::StatusOr<RecordSchema> RecordSchema::Create(
    std::vector<Attribute> attributes) {
  if (attributes.empty()) {
    return absl::InvalidArgumentError("schema needs at least one attribute");
  }
  std::unordered_set<std::string> seen;
  for (const Attribute& a : attributes) {
    if (a.name.empty()) {
      return absl::InvalidArgumentError("attribute names must be nonempty");
    }
    if (!seen.insert(a.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate attribute '", a.name, "'"));
    }
  }
  return RecordSchema(std::move(attributes));
}

std::optional<size_t> RecordSchema::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

RecordSchema PersonSchema() {
  return *RecordSchema::Create({{"given_name", AttributeKind::kString},
                                {"surname", AttributeKind::kString},
                                {"suburb", AttributeKind::kString},
                                {"postcode", AttributeKind::kString},
                                {"gender", AttributeKind::kCategorical}});
}

std::string NormalizeValue(std::string_view value) {
  size_t begin = 0;
  size_t end = value.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(value[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(value[end - 1])))
    --end;
  std::string out(value.substr(begin, end - begin));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::set<std::string> ExtractQgrams(std::string_view value, int q) {
  std::set<std::string> grams;
  if (q < 1) return grams;
  const std::string norm = NormalizeValue(value);
  const auto width = static_cast<size_t>(q);
  if (norm.size() < width) return grams;
  for (size_t i = 0; i + width <= norm.size(); ++i) {
    grams.insert(norm.substr(i, width));
  }
  return grams;
}

std::set<std::string> NeighborTokens(double value, double interval,
                                     double step) {
  std::set<std::string> tokens;
  if (!(step > 0) || !(interval >= 0)) return tokens;
  const int decimals = StepDecimals(step);
  const auto reach = static_cast<long>(std::floor(interval / step + 1e-9));
  for (long j = -reach; j <= reach; ++j) {
    tokens.insert(RenderFixed(value + static_cast<double>(j) * step, decimals));
  }
  return tokens;
}

std::vector<size_t> TokenPositions(std::string_view token,
                                   const EncodingParams& params) {
  static const bool sodium_ready = sodium_init() >= 0;
  (void)sodium_ready;
  const uint64_t h = KeyedHash(token, KeyFromSeed(params.hash_seed));
  std::vector<size_t> positions(static_cast<size_t>(params.num_hashes));
  for (size_t i = 0; i < positions.size(); ++i) {
    positions[i] = static_cast<size_t>(Mix64(h + i) % params.ell);
  }
  return positions;
}

absl::StatusOr<std::vector<std::string>> RecordTokens(
    const PlainRecord& record, const RecordSchema& schema,
    const EncodingParams& params) {
  if (record.values.size() != schema.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("record has ", record.values.size(),
                     " values but schema has ", schema.size(), " attributes"));
  }
  std::vector<std::string> tokens;
  for (size_t i = 0; i < schema.size(); ++i) {
    const Attribute& attr = schema.attributes()[i];
    const std::string& raw = record.values[i];
    std::set<std::string> local;
    switch (attr.kind) {
      case AttributeKind::kString:
        local = ExtractQgrams(raw, params.q);
        break;
      case AttributeKind::kNumeric: {
        const std::string norm = NormalizeValue(raw);
        if (norm.empty()) break;
        double v = 0;
        const auto [ptr, ec] =
            std::from_chars(norm.data(), norm.data() + norm.size(), v);
        if (ec != std::errc() || ptr != norm.data() + norm.size()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "attribute '", attr.name, "': '", raw, "' is not numeric"));
        }
        local = NeighborTokens(v, params.numeric_interval, params.numeric_step);
        break;
      }
      case AttributeKind::kCategorical: {
        std::string norm = NormalizeValue(raw);
        if (!norm.empty()) local.insert(std::move(norm));
        break;
      }
    }
    for (const std::string& t : local) {
      tokens.push_back(absl::StrCat(attr.name, ":", t));
    }
  }
  return tokens;
}

absl::StatusOr<BloomFilter> EncodeRecord(const PlainRecord& record,
                                         const RecordSchema& schema,
                                         const EncodingParams& params) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  absl::StatusOr<std::vector<std::string>> tokens =
      RecordTokens(record, schema, params);
  if (!tokens.ok()) return tokens.status();
  BloomFilter bf(params.ell);
  for (const std::string& t : *tokens) {
    for (size_t pos : TokenPositions(t, params)) bf.Set(pos);
  }
  return bf;
}

absl::StatusOr<double> DiceSimilarity(const BloomFilter& a,
                                      const BloomFilter& b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "length mismatch: ", a.size(), " vs ", b.size()));
  }
  const size_t total = a.Popcount() + b.Popcount();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(IntersectionCount(a, b)) /
         static_cast<double>(total);
}

double ExpectedFpr(const EncodingParams& params, double n) {
  if (n <= 0) return 0.0;
  const double k = params.num_hashes;
  return std::pow(1.0 - std::exp(-k * n / static_cast<double>(params.ell)), k);
}

}  // namespace ppcard
