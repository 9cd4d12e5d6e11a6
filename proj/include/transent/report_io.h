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

#ifndef TRANSENT_REPORT_IO_H_
#define TRANSENT_REPORT_IO_H_

// JSON, JSONL and CSV encodings of the pipeline's records.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "transent/bleu.h"
#include "transent/corpus.h"
#include "transent/degeneracy.h"
#include "transent/entropy.h"

namespace transent {

using Json = nlohmann::json;

void to_json(Json& j, const Occurrence& o);
void from_json(const Json& j, Occurrence& o);
void to_json(Json& j, const PivotRecord& r);
void from_json(const Json& j, PivotRecord& r);
void to_json(Json& j, const Subgroup& s);
void from_json(const Json& j, Subgroup& s);
void to_json(Json& j, const PairDegeneracy& p);
void from_json(const Json& j, PairDegeneracy& p);
void to_json(Json& j, const TokenEntropyRecord& r);
void from_json(const Json& j, TokenEntropyRecord& r);
void to_json(Json& j, const EntropyAggregate& a);
void to_json(Json& j, const EntropyParams& p);
void from_json(const Json& j, EntropyParams& p);
void to_json(Json& j, const BleuScore& b);

// Reports carry their records plus the provenance block passed in.
Json report_to_json(const ModelEntropyReport& report, const Json& provenance);
ModelEntropyReport report_from_json(const Json& j);

// A JSONL file whose first line is {"header": {...}} followed by records.
struct JsonlFile {
  Json header;
  std::vector<Json> records;
  // A final line without a newline or failing to parse; only tolerated when
  // reading journals.
  bool torn_tail = false;
};

JsonlFile read_jsonl(const std::filesystem::path& path,
                     bool tolerate_torn_tail = false);
std::string jsonl_line(const Json& record);

// Writes to a sibling temporary and renames over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Fixed-precision decimal, stable across runs.
std::string format_number(double value, int precision = 6);

// Rows: "all" record count, then K; one column per report.
std::string entropy_table_csv(std::span<const ModelEntropyReport> reports,
                              std::span<const std::string> labels);
std::string histogram_csv(const EntropyHistogram& hist);

}  // namespace transent

#endif  // TRANSENT_REPORT_IO_H_
