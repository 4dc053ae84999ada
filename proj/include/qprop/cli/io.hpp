#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "../errors.hpp"

namespace qprop::cli {

// Failures writing or reading artifact files.
class IoError : public Error {
public:
    using Error::Error;
};

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    if (first < last && *first == '+') ++first;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

// Write through a temporary in the same directory, then rename over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) throw IoError("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_) throw IoError("csv: row width does not match the header");
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
        out_ << '\n';
        ++rows_;
    }

    std::size_t rows() const { return rows_; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    std::size_t columns_ = 0;
    std::size_t rows_ = 0;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Numeric CSV with one optional header line (detected by a non-numeric first field).
inline Table read_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (t.rows.empty() && t.header.empty()) {
            try {
                parse_double(fields.front());
            } catch (const std::invalid_argument&) {
                t.header = fields;
                continue;
            }
        }
        std::vector<double> row;
        for (const auto& field : fields) {
            try {
                row.push_back(parse_double(field));
            } catch (const std::invalid_argument&) {
                throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + field + "'");
            }
        }
        if (!t.rows.empty() && row.size() != t.rows.front().size())
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": row width differs");
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace qprop::cli
