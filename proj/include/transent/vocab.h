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

#ifndef TRANSENT_VOCAB_H_
#define TRANSENT_VOCAB_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "transent/types.h"

namespace transent {

struct VocabEntry {
  TokenId id{};
  std::string surface;
  // Non-substitutable: padding, sequence delimiters, unknown.
  bool special = false;

  bool operator==(const VocabEntry&) const = default;
};

// Dense id -> surface table. Ids run 0..size-1 and surfaces are unique.
class Vocab {
 public:
  Vocab() = default;
  // Entries may arrive in any order; throws std::invalid_argument if the ids
  // are not dense or a surface repeats.
  explicit Vocab(std::vector<VocabEntry> entries);

  // "<prefix><i>" surfaces; the listed ids are flagged special.
  static Vocab synthetic(std::size_t size, std::string_view prefix,
                         const std::vector<TokenId>& specials = {});

  std::size_t size() const { return entries_.size(); }
  bool contains(TokenId id) const { return to_index(id) < entries_.size(); }
  const VocabEntry& at(TokenId id) const;
  bool is_special(TokenId id) const { return at(id).special; }
  std::size_t special_count() const { return special_count_; }

  std::optional<TokenId> find(std::string_view surface) const;
  // The special entry with surface "<unk>", if present.
  std::optional<TokenId> unknown() const { return unknown_; }

  // Every non-special id, ascending. This is the replacement universe of a
  // substitution sweep (the pivot itself is removed by the sweep).
  std::vector<TokenId> substitution_universe() const;

  const std::vector<VocabEntry>& entries() const { return entries_; }

  bool operator==(const Vocab& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, TokenId> by_surface_;
  std::size_t special_count_ = 0;
  std::optional<TokenId> unknown_;
};

// One `id<TAB>surface<TAB>special_flag` line per entry; the flag is 0/1 or
// false/true.
Vocab load_vocab(const std::filesystem::path& path);
void write_vocab(const Vocab& vocab, const std::filesystem::path& path);

}  // namespace transent

#endif  // TRANSENT_VOCAB_H_
