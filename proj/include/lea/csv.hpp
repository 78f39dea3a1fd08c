// Copyright 2026 The Authors.
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

#ifndef LEA_CSV_HPP_
#define LEA_CSV_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lea {

// Shortest representation that parses back to the same double; "nan",
// "inf" and "-inf" for the non-finite values.
std::string format_number(double value);

// Strict parses: the whole field must be consumed.  Failures throw IoError.
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

std::vector<std::string> split_list(std::string_view text, char sep);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based file line of each row

  // Column position by name, or -1.
  int column(std::string_view name) const;
};

// Reads a comma-separated file with a header row.  Double-quoted fields
// may contain commas; blank lines are skipped.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::string_view text, const std::string& source = "<memory>");

}  // namespace lea

#endif  // LEA_CSV_HPP_
