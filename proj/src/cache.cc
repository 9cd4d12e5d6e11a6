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

#include "transent/cache.h"

#include <fcntl.h>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <system_error>

namespace transent {
namespace {

constexpr char kMagic[8] = {'T', 'R', 'N', 'S', 'L', 'O', 'G', '1'};
constexpr std::size_t kKeyBytes = 32;
constexpr std::size_t kChecksumBytes = 32;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>(v >> (8 * i)));
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<std::uint8_t>(p[i]);
  }
  return v;
}

std::string token_bytes(const TokenSeq& seq) {
  std::string buf;
  buf.reserve(seq.size() * 4);
  for (TokenId t : seq) put_u32(buf, to_index(t));
  return buf;
}

Digest payload_checksum(const Digest& key, std::string_view tokens) {
  Sha256 h;
  h.update(std::span<const std::uint8_t>(key));
  h.update(tokens);
  return h.finish();
}

}  // namespace

Digest cache_key(const DecodeParams& params, std::span<const TokenId> input) {
  std::string buf;
  buf.reserve(64 + params.model_id.size() + input.size() * 4);
  buf.append("transent.translation.v1");
  put_u32(buf, static_cast<std::uint32_t>(params.model_id.size()));
  buf.append(params.model_id);
  buf.append(strategy_name(params.strategy));
  buf.push_back('\0');
  put_u32(buf, params.max_output_len);
  put_u32(buf, static_cast<std::uint32_t>(input.size()));
  for (TokenId t : input) put_u32(buf, to_index(t));
  return sha256(buf);
}

TranslationStore::TranslationStore() = default;

TranslationStore::TranslationStore(std::filesystem::path path)
    : path_(std::move(path)) {
  if (path_.empty()) throw std::invalid_argument("cache path is empty");
  if (!std::filesystem::exists(path_)) {
    if (path_.has_parent_path()) {
      std::filesystem::create_directories(path_.parent_path());
    }
    std::ofstream create(path_, std::ios::binary);
    create.write(kMagic, sizeof kMagic);
    if (!create) throw std::runtime_error("cannot create cache " + path_.string());
  }
  replay();
  fd_ = ::open(path_.c_str(), O_RDWR | O_CLOEXEC);
  if (fd_ < 0) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot open cache " + path_.string());
  }
}

TranslationStore::~TranslationStore() {
  if (fd_ >= 0) ::close(fd_);
}

namespace {

// Validates a payload and decodes its tokens.
std::optional<Translation> decode_payload(const Digest& key, const char* p,
                                          std::size_t len) {
  if (len < 4 + kChecksumBytes) return std::nullopt;
  const std::uint32_t count = get_u32(p);
  if (len != 4 + std::size_t{count} * 4 + kChecksumBytes) return std::nullopt;
  const std::string_view tokens(p + 4, std::size_t{count} * 4);
  const Digest sum = payload_checksum(key, tokens);
  if (std::memcmp(sum.data(), p + 4 + tokens.size(), kChecksumBytes) != 0) {
    return std::nullopt;
  }
  Translation t;
  t.output.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    t.output.push_back(token(get_u32(tokens.data() + 4 * i)));
  }
  return t;
}

}  // namespace

void TranslationStore::replay() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read cache " + path_.string());
  const std::uint64_t file_size = std::filesystem::file_size(path_);
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) ||
      std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error(path_.string() + " is not a translation cache");
  }

  std::uint64_t pos = sizeof kMagic;
  char head[kKeyBytes + 4];
  std::string payload;
  while (pos < file_size) {
    if (file_size - pos < sizeof head || !in.read(head, sizeof head)) break;
    Digest key;
    std::memcpy(key.data(), head, kKeyBytes);
    const std::uint32_t len = get_u32(head + kKeyBytes);
    const std::uint64_t body = pos + sizeof head;
    if (file_size - body < len) break;
    payload.resize(len);
    if (!in.read(payload.data(), len)) break;
    pos = body + len;
    if (decode_payload(key, payload.data(), len)) {
      offsets_[key] = {body, len};
      ++open_stats_.records;
    } else {
      offsets_.erase(key);
      ++open_stats_.corrupt;
      spdlog::warn("cache {}: record {} failed its checksum; evicted",
                   path_.string(), to_hex(key).substr(0, 16));
    }
  }
  end_ = pos;
  if (pos < file_size) {
    open_stats_.truncated_bytes = file_size - pos;
    spdlog::warn("cache {}: discarding {} bytes of torn tail", path_.string(),
                 open_stats_.truncated_bytes);
    in.close();
    std::filesystem::resize_file(path_, pos);
  }
}

void TranslationStore::evict(const Digest& key) const {
  std::unique_lock lock(mu_);
  offsets_.erase(key);
  spdlog::warn("cache {}: record {} failed its checksum on read; evicted",
               path_.string(), to_hex(key).substr(0, 16));
}

std::optional<Translation> TranslationStore::read_payload(
    const Digest& key, const Location& loc) const {
  std::string buf(loc.length, '\0');
  std::size_t got = 0;
  while (got < buf.size()) {
    const ssize_t n = ::pread(fd_, buf.data() + got, buf.size() - got,
                              static_cast<off_t>(loc.offset + got));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    got += static_cast<std::size_t>(n);
  }
  if (got == buf.size()) {
    if (auto t = decode_payload(key, buf.data(), buf.size())) return t;
  }
  evict(key);
  return std::nullopt;
}

std::optional<Translation> TranslationStore::get(const Digest& key) const {
  Location loc;
  {
    std::shared_lock lock(mu_);
    if (!persistent()) {
      auto it = memory_.find(key);
      if (it == memory_.end()) return std::nullopt;
      return it->second;
    }
    auto it = offsets_.find(key);
    if (it == offsets_.end()) return std::nullopt;
    loc = it->second;
  }
  return read_payload(key, loc);
}

void TranslationStore::put(const Digest& key, const Translation& value) {
  std::unique_lock lock(mu_);
  if (!persistent()) {
    memory_[key] = value;
    return;
  }
  const std::string tokens = token_bytes(value.output);
  const Digest sum = payload_checksum(key, tokens);
  const auto len = static_cast<std::uint32_t>(4 + tokens.size() + kChecksumBytes);
  std::string rec;
  rec.reserve(kKeyBytes + 4 + len);
  rec.append(reinterpret_cast<const char*>(key.data()), kKeyBytes);
  put_u32(rec, len);
  put_u32(rec, static_cast<std::uint32_t>(value.output.size()));
  rec.append(tokens);
  rec.append(reinterpret_cast<const char*>(sum.data()), kChecksumBytes);

  std::size_t written = 0;
  while (written < rec.size()) {
    const ssize_t n = ::pwrite(fd_, rec.data() + written, rec.size() - written,
                               static_cast<off_t>(end_ + written));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      throw std::system_error(errno, std::generic_category(),
                              "write to cache " + path_.string() + " failed");
    }
    written += static_cast<std::size_t>(n);
  }
  offsets_[key] = {end_ + kKeyBytes + 4, len};
  end_ += rec.size();
}

std::size_t TranslationStore::size() const {
  std::shared_lock lock(mu_);
  return persistent() ? offsets_.size() : memory_.size();
}

CachedTranslator::CachedTranslator(Translator& inner, TranslationStore& store,
                                   std::size_t max_dispatch)
    : inner_(inner), store_(store), max_dispatch_(max_dispatch) {}

CacheStats CachedTranslator::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

std::vector<Translation> CachedTranslator::translate_batch(
    std::span<const TokenSeq> inputs, const DecodeParams& params) {
  const std::size_t n = inputs.size();

  // Collapse duplicates within the batch.
  std::unordered_map<Digest, std::size_t, DigestHash> slot_by_key;
  std::vector<std::size_t> slot_of(n);
  std::vector<std::size_t> first_input;  // per slot
  std::vector<Digest> keys;              // per slot
  for (std::size_t i = 0; i < n; ++i) {
    Digest key = cache_key(params, inputs[i]);
    auto [it, inserted] = slot_by_key.try_emplace(key, keys.size());
    if (inserted) {
      keys.push_back(key);
      first_input.push_back(i);
    }
    slot_of[i] = it->second;
  }

  const std::size_t slots = keys.size();
  std::vector<std::optional<Translation>> resolved(slots);
  std::vector<std::size_t> missing;
  std::uint64_t hits = 0;
  for (std::size_t s = 0; s < slots; ++s) {
    resolved[s] = store_.get(keys[s]);
    if (resolved[s]) {
      ++hits;
    } else {
      missing.push_back(s);
    }
  }

  // Claim each missing key or join the caller already computing it.
  std::vector<std::pair<std::size_t, std::promise<Translation>>> owned;
  std::vector<std::pair<std::size_t, std::shared_future<Translation>>> joined;
  {
    std::lock_guard lock(mu_);
    stats_.requested += n;
    for (std::size_t s : missing) {
      if (auto it = in_flight_.find(keys[s]); it != in_flight_.end()) {
        joined.emplace_back(s, it->second);
        continue;
      }
      // A racing caller may have stored it after our first lookup.
      if (auto v = store_.get(keys[s])) {
        resolved[s] = std::move(v);
        ++hits;
        continue;
      }
      std::promise<Translation> p;
      in_flight_.emplace(keys[s], p.get_future().share());
      owned.emplace_back(s, std::move(p));
    }
    stats_.hits += hits;
    stats_.joined += joined.size();
  }

  const std::size_t chunk =
      max_dispatch_ == 0 ? std::max<std::size_t>(owned.size(), 1) : max_dispatch_;
  std::size_t done = 0;     // owned entries fully dispatched
  std::size_t settled = 0;  // owned promises already fulfilled
  try {
    std::vector<TokenSeq> batch;
    while (done < owned.size()) {
      const std::size_t end = std::min(owned.size(), done + chunk);
      batch.clear();
      for (std::size_t i = done; i < end; ++i) {
        batch.push_back(inputs[first_input[owned[i].first]]);
      }
      auto out = inner_.translate_batch(batch, params);
      if (out.size() != batch.size()) {
        throw ProtocolError("backend returned " + std::to_string(out.size()) +
                            " translations for " + std::to_string(batch.size()) +
                            " inputs");
      }
      for (std::size_t i = done; i < end; ++i) {
        const std::size_t s = owned[i].first;
        Translation& t = out[i - done];
        store_.put(keys[s], t);
        owned[i].second.set_value(t);
        settled = i + 1;
        resolved[s] = std::move(t);
      }
      {
        std::lock_guard lock(mu_);
        ++stats_.inner_calls;
        stats_.inner_inputs += end - done;
        for (std::size_t i = done; i < end; ++i) {
          in_flight_.erase(keys[owned[i].first]);
        }
      }
      done = end;
    }
  } catch (...) {
    std::lock_guard lock(mu_);
    for (std::size_t i = done; i < owned.size(); ++i) {
      if (i >= settled) owned[i].second.set_exception(std::current_exception());
      in_flight_.erase(keys[owned[i].first]);
    }
    throw;
  }

  for (auto& [s, future] : joined) resolved[s] = future.get();

  std::vector<Translation> result;
  result.reserve(n);
  for (std::size_t i = 0; i < n; ++i) result.push_back(*resolved[slot_of[i]]);
  return result;
}

}  // namespace transent
