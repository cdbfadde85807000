// csv.hpp — deterministic CSV output (12 significant digits)

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "casimir/errors.hpp"

namespace casimir {

std::string format_sig12(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::size_t n_cols_{0};
    std::string path_;
};

} // namespace casimir
