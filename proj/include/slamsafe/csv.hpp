#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "slamsafe/errors.hpp"

namespace slamsafe {

// Locale-free shortest round-trip formatting, so emitted files are
// byte-stable across runs.
inline std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_fixed(double v, int precision) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw ConfigError("cannot write file: " + path);
    }

    // '#'-prefixed provenance lines, emitted before the header.
    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

// Minimal reader for the project's own files: skips '#' comments, splits on
// commas (no quoting — none of the emitted files need it).
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace slamsafe
