#include "sps/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sps/errors.hpp"

namespace sps {

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0.0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
        throw PreconditionError("CsvTable: row has " + std::to_string(cells.size()) +
                                " cells, expected " + std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(cells));
}

void CsvTable::add_numeric_row(std::span<const double> values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) {
        cells.push_back(format_number(v));
    }
    add_row(std::move(cells));
}

namespace {

void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k > 0) {
            out += ',';
        }
        out += cells[k];
    }
    out += '\n';
}

} // namespace

std::string CsvTable::render() const {
    std::string out;
    append_line(out, columns_);
    for (const auto& row : rows_) {
        append_line(out, row);
    }
    return out;
}

std::string render_key_values(const std::map<std::string, std::string>& entries) {
    std::string out;
    for (const auto& [key, value] : entries) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace sps
