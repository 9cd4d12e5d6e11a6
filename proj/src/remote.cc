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

#include "transent/remote.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace transent {
namespace {

using Json = nlohmann::json;

std::unique_ptr<httplib::Client> make_client(const RemoteOptions& o) {
  auto cli = std::make_unique<httplib::Client>(o.url);
  if (!cli->is_valid()) {
    throw TranslatorError("invalid translator url '" + o.url + "'");
  }
  cli->set_connection_timeout(o.timeout);
  cli->set_read_timeout(o.timeout);
  cli->set_write_timeout(o.timeout);
  return cli;
}

std::chrono::milliseconds backoff(const RemoteOptions& o, int attempt) {
  auto d = o.initial_backoff;
  for (int i = 0; i < attempt && d < o.max_backoff; ++i) d *= 2;
  return std::min(d, o.max_backoff);
}

// Runs `request` until it yields a non-503 response or attempts run out.
template <typename Request>
httplib::Result with_retries(const RemoteOptions& o, const char* what,
                             Request request) {
  std::string last_error;
  for (int attempt = 0; attempt < std::max(1, o.max_attempts); ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(backoff(o, attempt - 1));
    httplib::Result res = request();
    if (!res) {
      last_error = httplib::to_string(res.error());
    } else if (res->status == 503) {
      last_error = "503 overloaded";
    } else {
      return res;
    }
    spdlog::debug("{} {}: {} (attempt {})", what, o.url, last_error, attempt + 1);
  }
  throw TransportError(std::string(what) + " " + o.url + " failed after " +
                       std::to_string(std::max(1, o.max_attempts)) +
                       " attempts: " + last_error);
}

}  // namespace

RemoteTranslator::RemoteTranslator(RemoteOptions options)
    : options_(std::move(options)) {
  if (options_.max_batch == 0) options_.max_batch = 1;
  if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

std::string RemoteTranslator::encode_request(std::span<const TokenSeq> inputs,
                                             const DecodeParams& params) {
  Json in = Json::array();
  for (const TokenSeq& seq : inputs) in.push_back(to_indices(seq));
  Json body = {{"model", params.model_id},
               {"decode",
                {{"strategy", strategy_name(params.strategy)},
                 {"max_output_len", params.max_output_len}}},
               {"inputs", std::move(in)}};
  return body.dump();
}

std::vector<Translation> RemoteTranslator::decode_response(
    const std::string& body, std::size_t expected,
    std::uint32_t max_output_len) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("unparseable translate response: ") + e.what());
  }
  if (!j.is_object() || !j.contains("outputs") || !j["outputs"].is_array()) {
    throw ProtocolError("translate response lacks an \"outputs\" array");
  }
  const Json& outputs = j["outputs"];
  if (outputs.size() != expected) {
    throw ProtocolError("backend returned " + std::to_string(outputs.size()) +
                        " outputs for " + std::to_string(expected) + " inputs");
  }
  std::vector<Translation> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    const Json& seq = outputs[i];
    if (!seq.is_array() || seq.empty() || seq.size() > max_output_len) {
      throw ProtocolError("output " + std::to_string(i) +
                          " is not a token list of length 1.." +
                          std::to_string(max_output_len));
    }
    out[i].output.reserve(seq.size());
    for (const Json& v : seq) {
      if (!v.is_number_unsigned()) {
        throw ProtocolError("output " + std::to_string(i) +
                            " holds a non-token value");
      }
      out[i].output.push_back(token(v.get<std::uint32_t>()));
    }
  }
  return out;
}

Vocab RemoteTranslator::decode_vocab(const std::string& body) {
  try {
    const Json j = Json::parse(body);
    std::vector<VocabEntry> entries;
    for (const Json& e : j.at("entries")) {
      entries.push_back({token(e.at("id").get<std::uint32_t>()),
                         e.at("surface").get<std::string>(),
                         e.at("special").get<bool>()});
    }
    return Vocab(std::move(entries));
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("bad vocab response: ") + e.what());
  }
}

std::vector<Translation> RemoteTranslator::post_chunk(
    std::span<const TokenSeq> chunk, const DecodeParams& params) {
  {
    std::unique_lock lock(slots_mu_);
    slots_cv_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    RemoteTranslator* self;
    ~Release() {
      {
        std::lock_guard lock(self->slots_mu_);
        --self->in_flight_;
      }
      self->slots_cv_.notify_one();
    }
  } release{this};

  const std::string body = encode_request(chunk, params);
  auto cli = make_client(options_);
  auto res = with_retries(options_, "POST /v1/translate", [&] {
    return cli->Post("/v1/translate", body, "application/json");
  });
  if (res->status != 200) {
    throw ProtocolError("POST /v1/translate returned " +
                        std::to_string(res->status) + ": " + res->body);
  }
  return decode_response(res->body, chunk.size(), params.max_output_len);
}

std::vector<Translation> RemoteTranslator::translate_batch(
    std::span<const TokenSeq> inputs, const DecodeParams& params) {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].empty()) {
      throw std::invalid_argument("input " + std::to_string(i) + " is empty");
    }
  }
  std::vector<Translation> out;
  out.reserve(inputs.size());
  for (std::size_t begin = 0; begin < inputs.size(); begin += options_.max_batch) {
    const std::size_t len = std::min(options_.max_batch, inputs.size() - begin);
    auto part = post_chunk(inputs.subspan(begin, len), params);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

const Vocab& RemoteTranslator::fetch_vocab(const char* side,
                                           std::optional<Vocab>& slot) const {
  std::lock_guard lock(vocab_mu_);
  if (slot) return *slot;
  const std::string path = std::string("/v1/vocab?side=") + side;
  try {
    auto cli = make_client(options_);
    auto res = with_retries(options_, "GET /v1/vocab", [&] { return cli->Get(path); });
    if (res->status != 200) {
      throw ProtocolError("GET " + path + " returned " + std::to_string(res->status));
    }
    slot = decode_vocab(res->body);
  } catch (const TranslatorError& e) {
    throw TranslatorError(std::string("backend ") + side +
                          " vocab unavailable: " + e.what());
  }
  return *slot;
}

const Vocab& RemoteTranslator::source_vocab() const {
  return fetch_vocab("source", source_vocab_);
}

const Vocab& RemoteTranslator::target_vocab() const {
  return fetch_vocab("target", target_vocab_);
}

}  // namespace transent
