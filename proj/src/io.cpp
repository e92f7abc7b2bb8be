#include "spdckit/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spdc {

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline surprises
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (std::size_t c = 0; c < table.header.size(); ++c)
        out << (c ? "," : "") << table.header[c];
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::logic_error("CSV row width mismatch in '" + path + "'");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_sci(row[c]);
        out << "\n";
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace spdc
