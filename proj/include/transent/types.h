// Copyright 2026 The Transent Authors.
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

#ifndef TRANSENT_TYPES_H_
#define TRANSENT_TYPES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace transent {

// Index into a vocabulary. Source and target ids share the type; which
// vocabulary an id belongs to is determined by context.
enum class TokenId : std::uint32_t {};

using TokenSeq = std::vector<TokenId>;
using SentenceId = std::uint64_t;

constexpr std::uint32_t to_index(TokenId id) {
  return static_cast<std::uint32_t>(id);
}
constexpr TokenId token(std::uint32_t index) { return TokenId{index}; }

TokenSeq to_tokens(const std::vector<std::uint32_t>& ids);
std::vector<std::uint32_t> to_indices(const TokenSeq& seq);

// "3 7 9" style rendering, used in diagnostics.
std::string format_tokens(const TokenSeq& seq);

}  // namespace transent

#endif  // TRANSENT_TYPES_H_
