#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smtjpop {

/// FNV-1a, 64-bit: stable, dependency-free checksum for run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

std::string to_hex(std::uint64_t v);

/// Write via a temp file in the same directory, then rename into place, so a
/// crash never leaves a half-written artifact.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

/// Shortest round-trippable formatting for doubles; keeps data files both
/// readable and byte-reproducible.
std::string format_double(double v);

/// Column-oriented delimited text with a header row.
class Table {
public:
    explicit Table(std::vector<std::string> columns)
        : columns_(std::move(columns)) {}

    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& cells);
    std::string render() const;  // CSV with '#' free-comment support elsewhere
    std::size_t rows() const { return cells_.size(); }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> cells_;
};

/// Two-column numeric file (comments '#', blank lines and one header line
/// tolerated): trace ingestion (time, resistance) and rate tables (bias, Hz).
std::vector<std::pair<double, double>> read_two_column(const std::string& path);

}  // namespace smtjpop
