#include "casimir/csv.hpp"

#include <cstdio>

namespace casimir {

std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), n_cols_(header.size()), path_(path) {
    if (!out_) throw Error("CsvWriter: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw Error("CsvWriter: column count mismatch in " + path_);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_sig12(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
    if (!out_) throw Error("CsvWriter: failed writing " + path_);
}

} // namespace casimir
