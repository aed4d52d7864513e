#pragma once

#include <string>
#include <vector>

#include "equidisp/errors.hpp"
#include "equidisp/types.hpp"

namespace equidisp {

// Two named numeric columns of a headed CSV file, mapped to (x, y). Empty
// column names select the first two columns. Rows whose selected entries are
// missing or non-numeric are rejected; the ParseError carries their line
// numbers.
Sample2D load_xy_csv(const std::string& path, const std::string& x_col = "",
                     const std::string& y_col = "");

// Single named numeric column (first column when the name is empty).
std::vector<double> load_column_csv(const std::string& path,
                                    const std::string& col = "");

// Writes a two-column x,y CSV with full double precision.
void write_xy_csv(const std::string& path, const Sample2D& s);

}  // namespace equidisp
