#ifndef SPDCKIT_IO_HPP
#define SPDCKIT_IO_HPP

#include <string>
#include <vector>

namespace spdc {

/// Scientific notation with 9 significant digits; fixed format keeps rerun
/// outputs byte-identical.
std::string format_sci(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Single header row, comma separator, "." decimal, format_sci numbers.
void write_csv(const std::string& path, const CsvTable& table);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace spdc

#endif
