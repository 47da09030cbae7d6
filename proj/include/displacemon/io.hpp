#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "displacemon/core.hpp"

namespace displacemon::io {

// 17 significant digits: doubles survive a write/read round trip, and
// repeated runs produce byte-identical artifacts.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::string body;

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body += ',';
            body += cells[i];
        }
        body += '\n';
    }

    void numeric_row(const std::string& label, const RealVec& values) {
        body += label;
        for (int i = 0; i < values.size(); ++i) {
            body += ',';
            body += format_double(values[i]);
        }
        body += '\n';
    }
};

// Atomic write: temp file in the same directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IOError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw IOError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IOError("rename failed for " + path.string() + ": " + ec.message());
}

inline std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string hash_hex(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(text)));
    return buf;
}

} // namespace displacemon::io
