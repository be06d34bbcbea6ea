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

#ifndef PPCARD_BLOOM_FILTER_H_
#define PPCARD_BLOOM_FILTER_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace ppcard {

// Fixed-length bit vector. Bits are packed little-endian into 64-bit words;
// bits past `size()` in the last word are always zero.
class BloomFilter {
 public:
  BloomFilter() = default;
  explicit BloomFilter(size_t length)
      : length_(length), words_((length + 63) / 64, 0) {}

  // Filter of `length` bits with the given positions set.
  static BloomFilter FromPositions(size_t length,
                                   std::initializer_list<size_t> positions);

  // Parses the exchange-file hex form: ceil(length/8) bytes, bit 0 is the
  // most significant bit of the first byte.
  static absl::StatusOr<BloomFilter> FromHex(std::string_view hex,
                                             size_t length);

  size_t size() const { return length_; }

  bool Test(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void Set(size_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
  void Reset(size_t i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  void Flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

  size_t Popcount() const;

  std::span<const uint64_t> words() const { return words_; }

  std::string ToHex() const;
  // "0101..." with bit 0 first. Debugging aid.
  std::string ToBitString() const;

  friend bool operator==(const BloomFilter&, const BloomFilter&) = default;

 private:
  size_t length_ = 0;
  std::vector<uint64_t> words_;
};

// Popcount of a AND b. Lengths must match.
size_t IntersectionCount(const BloomFilter& a, const BloomFilter& b);

// Number of differing positions, which equals the squared Euclidean distance
// between the filters viewed as {0,1} vectors. Lengths must match.
size_t HammingDistance(const BloomFilter& a, const BloomFilter& b);

}  // namespace ppcard

#endif  // PPCARD_BLOOM_FILTER_H_
