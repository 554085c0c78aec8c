#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qint::cli {

// 9 significant digits, '.' decimal separator, no grouping; locale-proof.
std::string format_number(double value);
std::string format_integer(std::uint64_t value);
std::string format_flag(bool value);

// Minimal CSV builder: fixed column count, LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t columns() const { return columns_; }

private:
    std::size_t columns_;
    std::string body_;
};

} // namespace qint::cli
