#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace thermo1d {

/// Formats with 17 significant digits, enough to round-trip any double.
std::string format_number(double v);

/// CSV file written to `<path>.tmp` and renamed onto `path` by commit().
/// A writer destroyed without commit() removes its temporary file, so a
/// partially written table never appears under the final name.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, std::string_view header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(std::initializer_list<double> values);
    void row(const std::vector<std::string>& cells);
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

}  // namespace thermo1d
