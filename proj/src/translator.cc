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

#include "transent/translator.h"

#include <sstream>

namespace transent {

TokenSeq to_tokens(const std::vector<std::uint32_t>& ids) {
  TokenSeq out;
  out.reserve(ids.size());
  for (auto i : ids) out.push_back(token(i));
  return out;
}

std::vector<std::uint32_t> to_indices(const TokenSeq& seq) {
  std::vector<std::uint32_t> out;
  out.reserve(seq.size());
  for (auto t : seq) out.push_back(to_index(t));
  return out;
}

std::string format_tokens(const TokenSeq& seq) {
  std::ostringstream os;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) os << ' ';
    os << to_index(seq[i]);
  }
  return os.str();
}

const char* strategy_name(DecodeStrategy strategy) {
  switch (strategy) {
    case DecodeStrategy::kGreedy:
      return "greedy";
  }
  return "unknown";
}

Translation translate_one(Translator& translator, const TokenSeq& input,
                          const DecodeParams& params) {
  auto out = translator.translate_batch(std::span<const TokenSeq>(&input, 1),
                                        params);
  if (out.size() != 1) {
    throw ProtocolError("translator returned " + std::to_string(out.size()) +
                        " outputs for 1 input");
  }
  return std::move(out.front());
}

void validate_inputs(std::span<const TokenSeq> inputs, const Vocab& vocab) {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].empty()) {
      throw std::invalid_argument("input " + std::to_string(i) + " is empty");
    }
    for (TokenId t : inputs[i]) {
      if (!vocab.contains(t)) {
        throw std::invalid_argument(
            "input " + std::to_string(i) + " has token " +
            std::to_string(to_index(t)) + " outside the source vocab");
      }
    }
  }
}

}  // namespace transent
