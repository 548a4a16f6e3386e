// CSV and binary checkpoint formats.
#pragma once

#include <string>
#include <vector>

#include "wwlab/grid.hpp"

namespace wwlab {

void write_field_csv(const std::string& path, const Grid1D& g, const Vec& f);

// Generic table with a header row.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// Layout: "WWLAB1", L (float64), N (int64), then the fields back to back as
// raw float64 values, all little endian. The field count follows from the size.
void write_checkpoint(const std::string& path, const Grid1D& g, const std::vector<Vec>& fields);
std::vector<Vec> read_checkpoint(const std::string& path, Grid1D* g);

}  // namespace wwlab
