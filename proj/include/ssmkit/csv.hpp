// Copyright 2026 The ssmkit Authors
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

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace ssmkit::csv {

/// Shortest round-trip decimal representation (deterministic for a given
/// build, which the byte-identical rerun guarantee relies on).
std::string format_double(double value);

/// Minimal CSV writer: header row, then rows of preformatted fields. No
/// quoting — emitted fields never contain separators.
class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& header);

  void write_row(const std::vector<std::string>& fields);
  void write_row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t num_columns_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a comma-separated file with a header row. Throws IoError on missing
/// files or ragged rows.
Table read_table(const std::string& path);

double parse_double(const std::string& field);

}  // namespace ssmkit::csv
