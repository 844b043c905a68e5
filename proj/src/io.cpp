#include "smtjpop/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smtjpop/errors.hpp"

namespace smtjpop {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SimulationError("cannot write " + tmp.string());
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) throw SimulationError("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[32];
    // round-trippable shortest form
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

void Table::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw SimulationError("table row width mismatch");
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_double(v));
    cells_.push_back(std::move(row));
}

void Table::add_row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw SimulationError("table row width mismatch");
    cells_.push_back(cells);
}

std::string Table::render() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : cells_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

std::vector<std::pair<double, double>> read_two_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    long line_no = 0;
    bool header_skipped = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        std::istringstream ss(line);
        double a, b;
        if (!(ss >> a >> b)) {
            if (!header_skipped) {
                header_skipped = true;
                continue;
            }
            throw ConfigError("parse error at line " + std::to_string(line_no) +
                              " of " + path);
        }
        header_skipped = true;
        rows.emplace_back(a, b);
    }
    return rows;
}

}  // namespace smtjpop
