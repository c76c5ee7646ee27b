// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#include "mbtvlc/report.hpp"

#include <cmath>
#include <cstdio>

#include "mbtvlc/error.hpp"

namespace mbtvlc {

std::string sci(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void CsvTable::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size()) {
        throw std::logic_error("CSV row width does not match header");
    }
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const
{
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += cells[i];
        }
        out += '\n';
    };
    emit(header_);
    for (const auto& r : rows_) {
        emit(r);
    }
    return out;
}

}  // namespace mbtvlc
