// Deterministic CSV emission: fixed header order, '%.17g' cells, '\n' rows.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace alvc {

std::string format_g17(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace alvc
