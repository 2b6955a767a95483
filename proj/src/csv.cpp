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

#include "qrp/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <type_traits>

#include "qrp/digest.hpp"
#include "qrp/errors.hpp"

namespace qrp {

namespace {

void append_field(std::string &out, std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        append_field(text_, header[i]);
    }
    text_ += '\n';
}

void CsvWriter::add_row(const std::vector<Cell> &cells) {
    if (cells.size() != width_)
        throw DimensionError("CSV row has " + std::to_string(cells.size()) + " fields, header has " +
                             std::to_string(width_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        std::visit(
            [this](const auto &v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) text_ += format_double(v);
                else if constexpr (std::is_same_v<T, long long>) text_ += std::to_string(v);
                else append_field(text_, v);
            },
            cells[i]);
    }
    text_ += '\n';
    ++rows_;
}

std::uint64_t CsvWriter::digest() const {
    Fnv1a h;
    h.update(text_);
    return h.value();
}

void CsvWriter::write(const std::filesystem::path &path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(text_.data(), static_cast<std::streamsize>(text_.size()));
    if (!out) throw Error("io", "cannot write " + path.string());
}

std::string hex_digest(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

} // namespace qrp
