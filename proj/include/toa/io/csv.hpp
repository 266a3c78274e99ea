#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace toa {

// "%.17g", enough digits to round-trip any double.
std::string format_double(double x);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    CsvWriter& cell(double x);
    CsvWriter& cell(long long x);
    CsvWriter& cell(const std::string& s);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

}  // namespace toa
