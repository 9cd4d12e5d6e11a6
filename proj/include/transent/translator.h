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

#ifndef TRANSENT_TRANSLATOR_H_
#define TRANSENT_TRANSLATOR_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "transent/types.h"
#include "transent/vocab.h"

namespace transent {

enum class DecodeStrategy { kGreedy };

const char* strategy_name(DecodeStrategy strategy);

struct DecodeParams {
  DecodeStrategy strategy = DecodeStrategy::kGreedy;
  std::uint32_t max_output_len = 128;
  std::string model_id;

  bool operator==(const DecodeParams&) const = default;
};

struct Translation {
  TokenSeq output;

  bool operator==(const Translation&) const = default;
};

class TranslatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Backend unreachable or overloaded after retries; the call may be retried.
class TransportError : public TranslatorError {
 public:
  using TranslatorError::TranslatorError;
};

// Backend answered but violated the protocol (wrong count, bad body, 4xx).
class ProtocolError : public TranslatorError {
 public:
  using TranslatorError::TranslatorError;
};

// A deterministic translator. translate_batch must be pure: the output for an
// input depends only on (input, params), never on its batch neighbours or
// position. Implementations are safe for concurrent calls.
class Translator {
 public:
  virtual ~Translator() = default;

  virtual std::vector<Translation> translate_batch(
      std::span<const TokenSeq> inputs, const DecodeParams& params) = 0;

  // The exact substitution universe. Throws TranslatorError when the backend
  // cannot report it.
  virtual const Vocab& source_vocab() const = 0;
  virtual const Vocab& target_vocab() const = 0;
};

Translation translate_one(Translator& translator, const TokenSeq& input,
                          const DecodeParams& params);

// Rejects empty inputs and ids outside `vocab`.
void validate_inputs(std::span<const TokenSeq> inputs, const Vocab& vocab);

}  // namespace transent

#endif  // TRANSENT_TRANSLATOR_H_
