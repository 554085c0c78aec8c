#include "qint/csv.hpp"

#include <charconv>

#include "qint/errors.hpp"

namespace qint::cli {

std::string format_number(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 9);
    return std::string(buffer, result.ptr);
}

std::string format_integer(std::uint64_t value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::string format_flag(bool value) { return value ? "true" : "false"; }

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    add_row(std::move(header));
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_)
        throw validation_error("CsvTable: row width " + std::to_string(cells.size()) +
                               " does not match header width " + std::to_string(columns_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0)
            body_ += ',';
        body_ += cells[i];
    }
    body_ += '\n';
}

std::string CsvTable::str() const { return body_; }

} // namespace qint::cli
