// Copyright 2026 The frc-kit Authors. All Rights Reserved.
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

#include <filesystem>
#include <string>
#include <vector>

namespace frckit::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, first line is the header. No quoting.
CsvTable read_csv(const std::filesystem::path& path);

/// Throws InputError naming the column and file when absent or non-numeric.
std::vector<double> numeric_column(const CsvTable& table, const std::string& name,
                                   const std::filesystem::path& source);

/// Shortest round-trip text for a double; "inf" / "-inf" / "nan" for non-finite.
std::string format_number(double v);

} // namespace frckit::cli
