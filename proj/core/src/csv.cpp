#include "alvc/csv.hpp"

#include <cstdio>

namespace alvc {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != 0) os << ',';
        os << header[j];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j != 0) os << ',';
            os << format_g17(row[j]);
        }
        os << '\n';
    }
}

} // namespace alvc
