#include "thermo1d/csv.hpp"

#include "thermo1d/errors.hpp"

#include <cstdio>
#include <system_error>

namespace thermo1d {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, std::string_view header)
    : path_(std::move(path)), tmp_(path_.string() + ".tmp")
{
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) {
        throw Error("cannot write " + tmp_.string());
    }
    out_ << header << '\n';
}

CsvWriter::~CsvWriter()
{
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(tmp_, ec);
    }
}

void CsvWriter::row(std::initializer_list<double> values)
{
    bool first = true;
    for (double v : values) {
        if (!first) {
            out_ << ',';
        }
        out_ << format_number(v);
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            out_ << ',';
        }
        out_ << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::commit()
{
    out_.flush();
    if (!out_) {
        throw Error("write failed for " + tmp_.string());
    }
    out_.close();
    std::filesystem::rename(tmp_, path_);
    committed_ = true;
}

}  // namespace thermo1d
