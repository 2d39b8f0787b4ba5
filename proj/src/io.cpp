#include "chemsim/io.hpp"

#include "chemsim/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace chemsim {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(cells[i]);
    }
    os << "\r\n";
}

void write_snapshot(const std::string& path, double t, const Grid2D& grid,
                    const ScalarField& values) {
    std::ofstream os(path);
    if (!os) throw ConfigError("snapshot: cannot write '" + path + "'");
    os << "t=" << format_g17(t) << '\n';
    os << "nx=" << grid.nx << " ny=" << grid.ny << '\n';
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (i) os << ' ';
            os << format_g17(values[grid.idx(i, j)]);
        }
        os << '\n';
    }
}

void write_snapshot(const std::string& path, double t, const RadialGrid& grid,
                    const ScalarField& values) {
    std::ofstream os(path);
    if (!os) throw ConfigError("snapshot: cannot write '" + path + "'");
    os << "t=" << format_g17(t) << '\n';
    os << "nr=" << grid.nr << '\n';
    for (int i = 0; i < grid.nr; ++i) {
        if (i) os << ' ';
        os << format_g17(values[i]);
    }
    os << '\n';
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("snapshot: cannot open '" + path + "'");
    Snapshot s;
    std::string line;
    if (!std::getline(is, line) || line.rfind("t=", 0) != 0)
        throw ConfigError("snapshot: '" + path + "' is missing the t= header");
    try {
        s.t = std::stod(line.substr(2));
    } catch (const std::exception&) {
        throw ConfigError("snapshot: '" + path + "' has a bad t= header");
    }
    if (!std::getline(is, line))
        throw ConfigError("snapshot: '" + path + "' is missing the size header");
    std::size_t expected = 0;
    if (line.rfind("nr=", 0) == 0) {
        s.radial = true;
        s.nr = std::atoi(line.c_str() + 3);
        if (s.nr <= 0) throw ConfigError("snapshot: '" + path + "' has a bad nr= header");
        expected = static_cast<std::size_t>(s.nr);
    } else {
        int nx = 0, ny = 0;
        if (std::sscanf(line.c_str(), "nx=%d ny=%d", &nx, &ny) != 2 || nx <= 0 || ny <= 0)
            throw ConfigError("snapshot: '" + path + "' has a bad nx=/ny= header");
        s.nx = nx;
        s.ny = ny;
        expected = static_cast<std::size_t>(nx) * ny;
    }
    s.values.reserve(expected);
    double v;
    while (is >> v) s.values.push_back(v);
    if (s.values.size() != expected)
        throw ConfigError("snapshot: '" + path + "' holds " + std::to_string(s.values.size()) +
                          " values, expected " + std::to_string(expected));
    return s;
}

} // namespace chemsim
