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

#include "transent/report_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace transent {

void to_json(Json& j, const Occurrence& o) {
  j = Json{{"id", o.sentence}, {"position", o.position}};
}

void from_json(const Json& j, Occurrence& o) {
  o.sentence = j.at("id").get<SentenceId>();
  o.position = j.at("position").get<std::uint32_t>();
}

void to_json(Json& j, const PivotRecord& r) {
  j = Json{{"token", to_index(r.token)},
           {"surface", r.surface},
           {"frequency", r.frequency},
           {"sentences", r.sentences}};
}

void from_json(const Json& j, PivotRecord& r) {
  r.token = token(j.at("token").get<std::uint32_t>());
  r.surface = j.value("surface", std::string{});
  r.frequency = j.value("frequency", std::uint64_t{0});
  r.sentences = j.at("sentences").get<std::vector<Occurrence>>();
}

void to_json(Json& j, const Subgroup& s) {
  j = Json{{"pivot", to_index(s.pivot)},
           {"sentence_id", s.sentence_id},
           {"position", s.position},
           {"member_ids", to_indices(s.members)},
           {"size", s.size()},
           {"reference_output", to_indices(s.reference_output)}};
}

void from_json(const Json& j, Subgroup& s) {
  s.pivot = token(j.at("pivot").get<std::uint32_t>());
  s.sentence_id = j.at("sentence_id").get<SentenceId>();
  s.position = j.at("position").get<std::uint32_t>();
  s.members = to_tokens(j.at("member_ids").get<std::vector<std::uint32_t>>());
  s.reference_output =
      to_tokens(j.at("reference_output").get<std::vector<std::uint32_t>>());
  if (j.contains("size") && j["size"].get<std::size_t>() != s.members.size()) {
    throw std::invalid_argument("subgroup record size disagrees with member_ids");
  }
}

void to_json(Json& j, const PairDegeneracy& p) {
  j = Json{{"sentence_id", p.sentence_id},
           {"position_a", p.position_a},
           {"position_b", p.position_b},
           {"token_a", to_index(p.token_a)},
           {"token_b", to_index(p.token_b)},
           {"sg_a", p.sg_a},
           {"sg_b", p.sg_b},
           {"pair_count", p.pair_count},
           {"ratio", p.ratio ? Json(*p.ratio) : Json(nullptr)}};
}

void from_json(const Json& j, PairDegeneracy& p) {
  p.sentence_id = j.at("sentence_id").get<SentenceId>();
  p.position_a = j.at("position_a").get<std::uint32_t>();
  p.position_b = j.at("position_b").get<std::uint32_t>();
  p.token_a = token(j.at("token_a").get<std::uint32_t>());
  p.token_b = token(j.at("token_b").get<std::uint32_t>());
  p.sg_a = j.at("sg_a").get<std::uint64_t>();
  p.sg_b = j.at("sg_b").get<std::uint64_t>();
  p.pair_count = j.at("pair_count").get<std::uint64_t>();
  if (j.at("ratio").is_null()) {
    p.ratio.reset();
  } else {
    p.ratio = j["ratio"].get<double>();
  }
}

void to_json(Json& j, const TokenEntropyRecord& r) {
  j = Json{{"pivot", to_index(r.pivot)},
           {"surface", r.surface},
           {"sentences", r.sentences},
           {"avg_subgroup_size", r.avg_subgroup_size},
           {"kept_avg_subgroup_size", r.kept_avg_subgroup_size},
           {"n_av", r.n_av},
           {"distinct_replacements", r.distinct_replacements},
           {"entropy_raw", r.entropy_raw},
           {"entropy_thresholded", r.entropy_thresholded},
           {"beta_c", r.beta_c},
           {"surviving", r.surviving}};
}

void from_json(const Json& j, TokenEntropyRecord& r) {
  r.pivot = token(j.at("pivot").get<std::uint32_t>());
  r.surface = j.value("surface", std::string{});
  r.sentences = j.at("sentences").get<std::size_t>();
  r.avg_subgroup_size = j.at("avg_subgroup_size").get<double>();
  r.kept_avg_subgroup_size = j.at("kept_avg_subgroup_size").get<double>();
  r.n_av = j.at("n_av").get<std::uint64_t>();
  r.distinct_replacements = j.at("distinct_replacements").get<std::size_t>();
  r.entropy_raw = j.at("entropy_raw").get<double>();
  r.entropy_thresholded = j.at("entropy_thresholded").get<double>();
  r.beta_c = j.at("beta_c").get<double>();
  r.surviving = j.at("surviving").get<std::size_t>();
}

void to_json(Json& j, const EntropyAggregate& a) {
  j = Json{{"n", a.n}, {"k", a.k}, {"S", a.s}, {"S_K", a.s_k}};
}

namespace {

EntropyAggregate aggregate_from_json(const Json& j) {
  EntropyAggregate a;
  a.n = j.at("n").get<std::size_t>();
  a.k = j.at("k").get<std::size_t>();
  a.s = j.at("S").get<double>();
  a.s_k = j.at("S_K").get<double>();
  return a;
}

}  // namespace

void to_json(Json& j, const EntropyParams& p) {
  j = Json{{"keep", p.keep}, {"beta_c", p.beta_c}, {"k", p.k}};
}

void from_json(const Json& j, EntropyParams& p) {
  p.keep = j.value("keep", kDefaultKeep);
  p.beta_c = j.value("beta_c", kDefaultBetaC);
  p.k = j.value("k", kDefaultK);
}

void to_json(Json& j, const BleuScore& b) {
  j = Json{{"bleu", b.score},
           {"precisions", b.precisions},
           {"matches", b.matches},
           {"totals", b.totals},
           {"brevity_penalty", b.brevity_penalty},
           {"hypothesis_length", b.hypothesis_length},
           {"reference_length", b.reference_length}};
}

Json report_to_json(const ModelEntropyReport& report, const Json& provenance) {
  return Json{{"model_id", report.model_id},
              {"direction", report.direction},
              {"params", report.params},
              {"thresholded", report.thresholded},
              {"raw", report.raw},
              {"records", report.records},
              {"provenance", provenance}};
}

ModelEntropyReport report_from_json(const Json& j) {
  ModelEntropyReport r;
  r.model_id = j.at("model_id").get<std::string>();
  r.direction = j.at("direction").get<std::string>();
  r.params = j.at("params").get<EntropyParams>();
  r.thresholded = aggregate_from_json(j.at("thresholded"));
  r.raw = aggregate_from_json(j.at("raw"));
  r.records = j.at("records").get<std::vector<TokenEntropyRecord>>();
  return r;
}

JsonlFile read_jsonl(const std::filesystem::path& path,
                     bool tolerate_torn_tail) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  JsonlFile file;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    const std::size_t nl = data.find('\n', pos);
    const bool complete = nl != std::string::npos;
    const std::string line =
        data.substr(pos, complete ? nl - pos : std::string::npos);
    pos = complete ? nl + 1 : data.size();
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      if (tolerate_torn_tail && pos == data.size()) {
        file.torn_tail = true;
        break;
      }
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
    if (!complete && tolerate_torn_tail) {
      file.torn_tail = true;
      break;
    }
    if (line_no == 1 && j.is_object() && j.contains("header")) {
      file.header = j["header"];
    } else {
      file.records.push_back(std::move(j));
    }
  }
  return file;
}

std::string jsonl_line(const Json& record) { return record.dump() + "\n"; }

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string format_number(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  return buf;
}

std::string entropy_table_csv(std::span<const ModelEntropyReport> reports,
                              std::span<const std::string> labels) {
  if (reports.size() != labels.size()) {
    throw std::invalid_argument("one label per report required");
  }
  std::ostringstream os;
  os << "K lowest S(T)";
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  // First row: every record. Label it by the record count when all reports
  // agree on it, as in a "100" row.
  bool same_n = true;
  for (const auto& r : reports) same_n &= r.thresholded.n == reports.front().thresholded.n;
  os << (same_n && !reports.empty() ? std::to_string(reports.front().thresholded.n)
                                    : std::string("all"));
  for (const auto& r : reports) os << ',' << format_number(r.thresholded.s);
  os << '\n';
  bool same_k = true;
  for (const auto& r : reports) same_k &= r.thresholded.k == reports.front().thresholded.k;
  os << (same_k && !reports.empty() ? std::to_string(reports.front().thresholded.k)
                                    : std::string("K"));
  for (const auto& r : reports) os << ',' << format_number(r.thresholded.s_k);
  os << '\n';
  return os.str();
}

std::string histogram_csv(const EntropyHistogram& hist) {
  std::ostringstream os;
  os << "bin_start,count\n";
  for (const auto& [bin, count] : hist.bins) {
    os << format_number(static_cast<double>(bin) * hist.bin_width) << ',' << count
       << '\n';
  }
  return os.str();
}

}  // namespace transent
