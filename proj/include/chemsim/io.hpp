#pragma once

#include "chemsim/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace chemsim {

/// Shortest exact decimal form of a double (17 significant digits round-trip).
std::string format_g17(double v);

/// RFC-4180 quoting: fields containing commas, quotes or newlines get
/// quoted, embedded quotes doubled.
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

// Snapshot files: header lines "t=<time>" and "nx=<..> ny=<..>" (2D) or
// "nr=<..>" (radial), then whitespace-separated row-major cell values at
// 17 significant digits. Byte output is deterministic for fixed inputs.

void write_snapshot(const std::string& path, double t, const Grid2D& grid,
                    const ScalarField& values);
void write_snapshot(const std::string& path, double t, const RadialGrid& grid,
                    const ScalarField& values);

struct Snapshot {
    double t = 0.0;
    bool radial = false;
    int nx = 0, ny = 0, nr = 0;
    ScalarField values;
};

Snapshot read_snapshot(const std::string& path);

} // namespace chemsim
