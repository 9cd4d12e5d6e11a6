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

#ifndef TRANSENT_REMOTE_H_
#define TRANSENT_REMOTE_H_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "transent/translator.h"

namespace transent {

struct RemoteOptions {
  // scheme://host:port, e.g. "http://127.0.0.1:8080".
  std::string url;
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds max_backoff{5000};
  std::chrono::seconds timeout{120};
  // Inputs per POST; larger batches are split.
  std::size_t max_batch = 256;
  // Concurrent POSTs across all callers.
  std::size_t max_in_flight = 4;
};

// Client for the model-server wire protocol:
//   POST /v1/translate  {"model", "decode": {"strategy", "max_output_len"},
//                        "inputs": [[int...]...]} -> {"outputs": [[int...]...]}
//   GET  /v1/vocab?side=source|target -> {"entries": [{"id","surface","special"}]}
// 503 and connection failures are retried with exponential backoff; other
// non-200 statuses and malformed bodies raise ProtocolError.
class RemoteTranslator : public Translator {
 public:
  explicit RemoteTranslator(RemoteOptions options);

  std::vector<Translation> translate_batch(std::span<const TokenSeq> inputs,
                                           const DecodeParams& params) override;
  const Vocab& source_vocab() const override;
  const Vocab& target_vocab() const override;

  // Request body for one chunk, exactly as sent.
  static std::string encode_request(std::span<const TokenSeq> inputs,
                                    const DecodeParams& params);
  static std::vector<Translation> decode_response(const std::string& body,
                                                  std::size_t expected,
                                                  std::uint32_t max_output_len);
  static Vocab decode_vocab(const std::string& body);

 private:
  std::vector<Translation> post_chunk(std::span<const TokenSeq> chunk,
                                      const DecodeParams& params);
  const Vocab& fetch_vocab(const char* side, std::optional<Vocab>& slot) const;

  RemoteOptions options_;

  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  std::size_t in_flight_ = 0;

  mutable std::mutex vocab_mu_;
  mutable std::optional<Vocab> source_vocab_;
  mutable std::optional<Vocab> target_vocab_;
};

}  // namespace transent

#endif  // TRANSENT_REMOTE_H_
