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

#ifndef TRANSENT_CACHE_H_
#define TRANSENT_CACHE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <future>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "transent/digest.h"
#include "transent/translator.h"

namespace transent {

// Digest of (model id, decode params, source sequence).
Digest cache_key(const DecodeParams& params, std::span<const TokenId> input);

struct StoreOpenStats {
  std::size_t records = 0;
  std::size_t corrupt = 0;          // checksum or framing mismatch, evicted
  std::size_t truncated_bytes = 0;  // partial tail from an interrupted write
};

// Append-only record log of translations.
//
// File layout: an 8-byte magic, then records of
//   key (32 bytes) | payload length (u32 LE) | payload
// where payload is
//   token count (u32 LE) | tokens (u32 LE each) | SHA-256(key || tokens)
//
// At open the log is scanned once to rebuild a key -> offset index; payloads
// stay on disk. A record failing its checksum (at open or on read) is evicted
// and logged, so the caller recomputes it; a torn tail is cut off. A later
// record for a key supersedes an earlier one. Readers run concurrently;
// writes are serialized.
class TranslationStore {
 public:
  // In-memory only.
  TranslationStore();
  // Opens or creates the log at `path`.
  explicit TranslationStore(std::filesystem::path path);
  ~TranslationStore();

  TranslationStore(const TranslationStore&) = delete;
  TranslationStore& operator=(const TranslationStore&) = delete;

  std::optional<Translation> get(const Digest& key) const;
  void put(const Digest& key, const Translation& value);

  std::size_t size() const;
  bool persistent() const { return fd_ >= 0; }
  const StoreOpenStats& open_stats() const { return open_stats_; }

 private:
  struct Location {
    std::uint64_t offset = 0;  // payload start
    std::uint32_t length = 0;
  };

  void replay();
  std::optional<Translation> read_payload(const Digest& key,
                                          const Location& loc) const;
  void evict(const Digest& key) const;

  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t end_ = 0;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<Digest, Location, DigestHash> offsets_;
  std::unordered_map<Digest, Translation, DigestHash> memory_;
  StoreOpenStats open_stats_;
};

struct CacheStats {
  std::uint64_t requested = 0;     // inputs asked of this wrapper
  std::uint64_t hits = 0;          // served from the store
  std::uint64_t joined = 0;        // waited on another caller's dispatch
  std::uint64_t inner_calls = 0;   // translate_batch calls on the backend
  std::uint64_t inner_inputs = 0;  // inputs sent to the backend
};

// Deduplicating, caching front for another translator. Each distinct input
// reaches the inner backend at most once per store lifetime, including when
// concurrent callers race on the same key.
class CachedTranslator : public Translator {
 public:
  // max_dispatch bounds the batch size sent to the inner translator
  // (0 = unbounded).
  CachedTranslator(Translator& inner, TranslationStore& store,
                   std::size_t max_dispatch = 0);

  std::vector<Translation> translate_batch(std::span<const TokenSeq> inputs,
                                           const DecodeParams& params) override;
  const Vocab& source_vocab() const override { return inner_.source_vocab(); }
  const Vocab& target_vocab() const override { return inner_.target_vocab(); }

  CacheStats stats() const;

 private:
  Translator& inner_;
  TranslationStore& store_;
  std::size_t max_dispatch_;

  mutable std::mutex mu_;
  std::unordered_map<Digest, std::shared_future<Translation>, DigestHash>
      in_flight_;
  CacheStats stats_;
};

}  // namespace transent

#endif  // TRANSENT_CACHE_H_
