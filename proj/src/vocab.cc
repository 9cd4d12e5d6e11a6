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

#include "transent/vocab.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace transent {

Vocab::Vocab(std::vector<VocabEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const VocabEntry& a, const VocabEntry& b) { return a.id < b.id; });
  by_surface_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const VocabEntry& e = entries_[i];
    if (to_index(e.id) != i) {
      throw std::invalid_argument("vocab ids are not dense: expected id " +
                                  std::to_string(i) + ", found " +
                                  std::to_string(to_index(e.id)));
    }
    if (!by_surface_.emplace(e.surface, e.id).second) {
      throw std::invalid_argument("duplicate vocab surface '" + e.surface + "'");
    }
    if (e.special) {
      ++special_count_;
      if (e.surface == "<unk>") unknown_ = e.id;
    }
  }
}

Vocab Vocab::synthetic(std::size_t size, std::string_view prefix,
                       const std::vector<TokenId>& specials) {
  std::vector<VocabEntry> entries(size);
  for (std::size_t i = 0; i < size; ++i) {
    entries[i].id = token(static_cast<std::uint32_t>(i));
    entries[i].surface = std::string(prefix) + std::to_string(i);
  }
  for (TokenId s : specials) {
    if (to_index(s) >= size) {
      throw std::invalid_argument("special id out of range");
    }
    entries[to_index(s)].special = true;
  }
  return Vocab(std::move(entries));
}

const VocabEntry& Vocab::at(TokenId id) const {
  if (!contains(id)) {
    throw std::out_of_range("token id " + std::to_string(to_index(id)) +
                            " outside vocab of size " +
                            std::to_string(entries_.size()));
  }
  return entries_[to_index(id)];
}

std::optional<TokenId> Vocab::find(std::string_view surface) const {
  auto it = by_surface_.find(std::string(surface));
  if (it == by_surface_.end()) return std::nullopt;
  return it->second;
}

std::vector<TokenId> Vocab::substitution_universe() const {
  std::vector<TokenId> out;
  out.reserve(entries_.size() - special_count_);
  for (const VocabEntry& e : entries_) {
    if (!e.special) out.push_back(e.id);
  }
  return out;
}

namespace {

bool parse_flag(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw std::invalid_argument("bad special flag '" + s + "'");
}

}  // namespace

Vocab load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocab " + path.string());
  std::vector<VocabEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected id<TAB>surface<TAB>flag");
    }
    VocabEntry e;
    try {
      e.id = token(static_cast<std::uint32_t>(std::stoul(line.substr(0, t1))));
      e.special = parse_flag(line.substr(t2 + 1));
    } catch (const std::exception& ex) {
      throw std::invalid_argument(path.string() + ":" +
                                  std::to_string(line_no) + ": " + ex.what());
    }
    e.surface = line.substr(t1 + 1, t2 - t1 - 1);
    entries.push_back(std::move(e));
  }
  return Vocab(std::move(entries));
}

void write_vocab(const Vocab& vocab, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocab " + path.string());
  for (const VocabEntry& e : vocab.entries()) {
    out << to_index(e.id) << '\t' << e.surface << '\t' << (e.special ? 1 : 0)
        << '\n';
  }
}

}  // namespace transent
