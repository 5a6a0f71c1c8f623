// csv.hpp: Byte-stable CSV and key=value emission
//
// Numbers are printed with 17 significant digits ("%.17g"), enough to round-trip
// any double; NaN and infinities print as nan, inf, -inf. Lines end in LF.

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sps {

std::string format_number(double value);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    // Throws PreconditionError when the cell count differs from the column count.
    void add_row(std::vector<std::string> cells);
    void add_numeric_row(std::span<const double> values);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t row_count() const { return rows_.size(); }
    std::string render() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// One "key=value" line per entry, in key order.
std::string render_key_values(const std::map<std::string, std::string>& entries);

// Writes bytes verbatim; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace sps
