#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace padicmv {

/// A small in-memory CSV document: `#`-prefixed comment lines, a header row,
/// then data rows. Fields are written verbatim; callers keep them free of
/// commas and newlines.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os) const;
    /// Throws std::runtime_error if the file cannot be written.
    void write(const std::filesystem::path& path) const;
};

/// Shortest round-trip decimal form of a long double (deterministic).
std::string format_real(long double x);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace padicmv
