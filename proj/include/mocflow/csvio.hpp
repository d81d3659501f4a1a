#pragma once

/// @file csvio.hpp
/// @brief Deterministic CSV/text output and small CSV input helpers.
///
/// Numbers are printed in the shortest representation that round-trips to
/// the same double, so identical runs produce byte-identical files.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mocflow/errors.hpp"

namespace mocflow {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{})
        throw ConfigError("could not parse number: '" + std::string(s) + "'");
    return v;
}

/// Write via a temp file and rename, so readers never observe a partial file.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

/// Append one CSV row of doubles.
inline void append_row(std::string& out, std::span<const double> row) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_double(row[i]);
    }
    out += '\n';
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

/// Read a comma-separated table with a mandatory header row. Lines starting
/// with '#' are skipped.
inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string_view> cells;
        size_t pos = 0;
        const std::string_view sv = line;
        while (true) {
            const size_t comma = sv.find(',', pos);
            cells.push_back(sv.substr(pos, comma - pos));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (!have_header) {
            for (auto c : cells) table.header.emplace_back(c);
            table.columns.resize(cells.size());
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size())
            throw ConfigError("ragged CSV row in " + path.string());
        for (size_t i = 0; i < cells.size(); ++i)
            table.columns[i].push_back(parse_double(cells[i]));
    }
    if (!have_header) throw ConfigError("missing CSV header in " + path.string());
    return table;
}

}  // namespace mocflow
