// Copyright 2026 The nliaudit Authors.
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

#ifndef NLIAUDIT_CSV_HPP_
#define NLIAUDIT_CSV_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nliaudit {

using CsvRow = std::vector<std::string>;

// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted and
// embedded quotes doubled.
std::string CsvEscape(std::string_view field);
std::string CsvLine(const CsvRow& row);  // includes trailing '\n'

// Parses RFC 4180 text. Quoted fields may span lines. A trailing newline does
// not produce an empty row.
std::vector<CsvRow> ParseCsv(std::string_view text);

// Shortest decimal form that reads back to the same double.
std::string FormatDouble(double value);
double ParseDouble(std::string_view text);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view data);

}  // namespace nliaudit

#endif  // NLIAUDIT_CSV_HPP_
