// Copyright 2026 The QRP Authors
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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qrp {

/// Shortest form with 17 significant digits and '.' as decimal separator,
/// independent of the process locale.
std::string format_double(double v);

class CsvWriter {
  public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvWriter(std::vector<std::string> header);

    /// Throws DimensionError if the row width differs from the header.
    void add_row(const std::vector<Cell> &cells);

    std::size_t rows() const { return rows_; }
    const std::string &text() const { return text_; }
    /// FNV-1a of the file bytes.
    std::uint64_t digest() const;
    void write(const std::filesystem::path &path) const;

  private:
    std::size_t width_;
    std::size_t rows_ = 0;
    std::string text_;
};

std::string hex_digest(std::uint64_t value);

} // namespace qrp
