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

// Record-level Bloom filter encoding. Every attribute of a record is
// tokenized (q-grams for strings, a numeric neighbourhood for numbers, the
// literal value for categoricals), each token is tagged with its attribute
// name, and all tokens are hash-mapped into one filter of `ell` bits.

#ifndef PPCARD_ENCODING_H_
#define PPCARD_ENCODING_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ppcard/bloom_filter.h"

namespace ppcard {

struct EncodingParams {
  int q = 2;
  size_t ell = 200;
  int num_hashes = 20;
  uint64_t hash_seed = 0x5eed5eed5eed5eedULL;
  // Half-width and grid step of the neighbourhood encoded for numeric values.
  double numeric_interval = 0.0;
  double numeric_step = 1.0;

  absl::Status Validate() const;
};

enum class AttributeKind { kString, kNumeric, kCategorical };

std::string_view AttributeKindName(AttributeKind kind);
absl::StatusOr<AttributeKind> ParseAttributeKind(std::string_view name);

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kString;
};

class RecordSchema {
 public:
  // Requires at least one attribute and unique names.
  static absl::StatusOr<RecordSchema> Create(std::vector<Attribute> attributes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  size_t size() const { return attributes_.size(); }

  // Position of the named attribute, if present.
  std::optional<size_t> IndexOf(std::string_view name) const;

 private:
  explicit RecordSchema(std::vector<Attribute> attributes)
      : attributes_(std::move(attributes)) {}

  std::vector<Attribute> attributes_;
};

// The five-attribute person schema used by the data generator: given name,
// surname, suburb, postcode (all strings) and gender (categorical).
RecordSchema PersonSchema();

struct PlainRecord {
  std::vector<std::string> values;
  // Ground truth for evaluation only. Never encoded.
  std::optional<std::string> entity_id;
};

// Lowercases and trims ASCII whitespace.
std::string NormalizeValue(std::string_view value);

// All distinct contiguous substrings of length q of the normalized value.
// Values shorter than q produce no grams. No padding is applied.
std::set<std::string> ExtractQgrams(std::string_view value, int q);

// Tokens for every grid value value + j*step with |j*step| <= interval. Each
// token is rendered with as many decimals as `step` needs, so (42, 2, 1)
// yields {"40", ..., "44"} and (10, 1, 0.5) yields {"9.0", ..., "11.0"}.
std::set<std::string> NeighborTokens(double value, double interval,
                                     double step);

// The k bit positions a token maps to.
std::vector<size_t> TokenPositions(std::string_view token,
                                   const EncodingParams& params);

// Tagged tokens ("<attribute>:<token>") for a record. Exposed so tests and
// tooling can inspect exactly what gets hashed.
absl::StatusOr<std::vector<std::string>> RecordTokens(
    const PlainRecord& record, const RecordSchema& schema,
    const EncodingParams& params);

absl::StatusOr<BloomFilter> EncodeRecord(const PlainRecord& record,
                                         const RecordSchema& schema,
                                         const EncodingParams& params);

// 2|a AND b| / (|a| + |b|); 1 when both filters are empty.
absl::StatusOr<double> DiceSimilarity(const BloomFilter& a,
                                      const BloomFilter& b);

// (1 - exp(-k n / ell))^k.
double ExpectedFpr(const EncodingParams& params, double n);

}  // namespace ppcard

#endif  // PPCARD_ENCODING_H_
