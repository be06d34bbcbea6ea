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

#include "ppcard/bloom_filter.h"

#include <cassert>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace ppcard {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BloomFilter BloomFilter::FromPositions(size_t length,
                                       std::initializer_list<size_t> positions) {
  BloomFilter bf(length);
  for (size_t p : positions) bf.Set(p);
  return bf;
}

absl::StatusOr<BloomFilter> BloomFilter::FromHex(std::string_view hex,
                                                 size_t length) {
  const size_t num_bytes = (length + 7) / 8;
  if (hex.size() != 2 * num_bytes) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", 2 * num_bytes, " hex digits for ell=",
                     length, ", got ", hex.size()));
  }
  BloomFilter bf(length);
  for (size_t byte = 0; byte < num_bytes; ++byte) {
    const int hi = HexValue(hex[2 * byte]);
    const int lo = HexValue(hex[2 * byte + 1]);
    if (hi < 0 || lo < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid hex digit near offset ", 2 * byte));
    }
    const int value = (hi << 4) | lo;
    for (int b = 0; b < 8; ++b) {
      if (((value >> (7 - b)) & 1) == 0) continue;
      const size_t pos = 8 * byte + b;
      if (pos >= length) {
        return absl::InvalidArgumentError("nonzero padding bits");
      }
      bf.Set(pos);
    }
  }
  return bf;
}

size_t BloomFilter::Popcount() const {
  size_t count = 0;
  for (uint64_t w : words_) count += std::popcount(w);
  return count;
}

std::string BloomFilter::ToHex() const {
  const size_t num_bytes = (length_ + 7) / 8;
  std::string out;
  out.reserve(2 * num_bytes);
  for (size_t byte = 0; byte < num_bytes; ++byte) {
    int value = 0;
    for (int b = 0; b < 8; ++b) {
      const size_t pos = 8 * byte + b;
      if (pos < length_ && Test(pos)) value |= 1 << (7 - b);
    }
    out.push_back(kHexDigits[value >> 4]);
    out.push_back(kHexDigits[value & 15]);
  }
  return out;
}

std::string BloomFilter::ToBitString() const {
  std::string out(length_, '0');
  for (size_t i = 0; i < length_; ++i) {
    if (Test(i)) out[i] = '1';
  }
  return out;
}

size_t IntersectionCount(const BloomFilter& a, const BloomFilter& b) {
  assert(a.size() == b.size());
  const auto wa = a.words();
  const auto wb = b.words();
  size_t count = 0;
  for (size_t i = 0; i < wa.size(); ++i) count += std::popcount(wa[i] & wb[i]);
  return count;
}

size_t HammingDistance(const BloomFilter& a, const BloomFilter& b) {
  assert(a.size() == b.size());
  const auto wa = a.words();
  const auto wb = b.words();
  size_t count = 0;
  for (size_t i = 0; i < wa.size(); ++i) count += std::popcount(wa[i] ^ wb[i]);
  return count;
}

}  // namespace ppcard
