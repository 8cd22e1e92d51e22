#include "modop/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "modop/error.hpp"

namespace modop::io {

namespace {

constexpr char kMagic[8] = {'M', 'O', 'D', 'O', 'P', 'P', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t columns) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("CSV input is empty");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const std::string t = trim(cell);
                row.push_back(std::stod(t, &used));
                if (used != t.size()) throw std::invalid_argument(t);
            } catch (const std::exception&) {
                throw InvalidArgument("CSV line " + std::to_string(lineno) + ": '" + cell + "' is not a number");
            }
        }
        if (row.size() != columns) {
            throw InvalidArgument("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                                  " columns, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidArgument("CSV input has no data rows");
    return rows;
}

std::size_t header_columns(std::istream& is) {
    const auto pos = is.tellg();
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("CSV input is empty");
    is.seekg(pos);
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

// Axis from the sorted distinct values of one coordinate column.
Axis axis_from_values(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-9 * (1 + std::abs(a)); }),
            v.end());
    if (v.size() < 2) throw InvalidArgument("CSV coordinates do not form a grid");
    Axis ax{-v.front(), static_cast<int>(v.size())};
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (std::abs(ax.coordinate(static_cast<int>(k)) - v[k]) > 1e-8 * (1 + std::abs(v[k]))) {
            throw InvalidArgument("CSV coordinates are not the samples -L + k*dx of a grid");
        }
    }
    return ax;
}

Grid grid_from_columns(const std::vector<std::vector<double>>& rows, std::size_t first, int d) {
    std::vector<Axis> axes;
    for (int a = 0; a < d; ++a) {
        std::vector<double> col;
        for (const auto& r : rows) col.push_back(r[first + static_cast<std::size_t>(a)]);
        axes.push_back(axis_from_values(std::move(col)));
    }
    return Grid::from_axes(std::move(axes));
}

template <class T>
void put(std::ostream& os, T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        os.write(bytes.data(), sizeof(T));
    } else {
        os.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
}

template <class T>
T get(std::istream& is) {
    std::array<char, sizeof(T)> bytes{};
    if (!is.read(bytes.data(), sizeof(T))) throw InvalidArgument("binary field is truncated");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

}  // namespace

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void write_function_csv(std::ostream& os, const SampledFunction& f) {
    const int d = f.grid.dim();
    os << (d == 1 ? "x" : "x1");
    for (int a = 1; a < d; ++a) os << ",x" << a + 1;
    os << ",re,im\n";
    for (std::size_t k = 0; k < f.size(); ++k) {
        const Point p = f.grid.point(k);
        for (int a = 0; a < d; ++a) os << format_double(p[static_cast<std::size_t>(a)]) << ",";
        os << format_double(f.values[k].real()) << "," << format_double(f.values[k].imag()) << "\n";
    }
}

void write_field_csv(std::ostream& os, const PhaseSpaceField& F) {
    const int d = F.grid_x.dim();
    if (d == 1) {
        os << "x,xi,re,im\n";
    } else {
        os << "x1,x2,xi1,xi2,re,im\n";
    }
    for (std::size_t i = 0; i < F.rows(); ++i) {
        const Point x = F.grid_x.point(i);
        for (std::size_t j = 0; j < F.cols(); ++j) {
            const Point xi = F.grid_xi.point(j);
            for (int a = 0; a < d; ++a) os << format_double(x[static_cast<std::size_t>(a)]) << ",";
            for (int a = 0; a < d; ++a) os << format_double(xi[static_cast<std::size_t>(a)]) << ",";
            os << format_double(F.at(i, j).real()) << "," << format_double(F.at(i, j).imag()) << "\n";
        }
    }
}

SampledFunction read_function_csv(std::istream& is) {
    const std::size_t cols = header_columns(is);
    if (cols != 3 && cols != 4) throw InvalidArgument("function CSV needs x,re,im or x1,x2,re,im columns");
    const int d = static_cast<int>(cols) - 2;
    const auto rows = read_rows(is, cols);
    const Grid g = grid_from_columns(rows, 0, d);
    if (g.size() != rows.size()) throw InvalidArgument("function CSV rows do not cover the grid exactly once");
    SampledFunction f(g);
    for (const auto& r : rows) {
        Index idx{};
        for (int a = 0; a < d; ++a) {
            const Axis& ax = g.axis(a);
            idx[static_cast<std::size_t>(a)] =
                static_cast<int>(std::lround((r[static_cast<std::size_t>(a)] + ax.half_width) / ax.spacing()));
        }
        f.values[g.flat(idx)] = cplx{r[cols - 2], r[cols - 1]};
    }
    return SampledFunction(g, std::move(f.values));
}

PhaseSpaceField read_field_csv(std::istream& is) {
    const std::size_t cols = header_columns(is);
    if (cols != 4 && cols != 6) throw InvalidArgument("field CSV needs x,xi,re,im or x1,x2,xi1,xi2,re,im columns");
    const int d = (static_cast<int>(cols) - 2) / 2;
    const auto rows = read_rows(is, cols);
    const Grid gx = grid_from_columns(rows, 0, d);
    const Grid gxi = grid_from_columns(rows, static_cast<std::size_t>(d), d);
    if (gx.size() * gxi.size() != rows.size()) throw InvalidArgument("field CSV rows do not cover the grid exactly once");
    PhaseSpaceField F(gx, gxi);
    for (const auto& r : rows) {
        Index ix{};
        Index ixi{};
        for (int a = 0; a < d; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            ix[ua] = static_cast<int>(std::lround((r[ua] + gx.axis(a).half_width) / gx.axis(a).spacing()));
            ixi[ua] = static_cast<int>(std::lround((r[ua + static_cast<std::size_t>(d)] + gxi.axis(a).half_width) /
                                                    gxi.axis(a).spacing()));
        }
        F.at(gx.flat(ix), gxi.flat(ixi)) = cplx{r[cols - 2], r[cols - 1]};
    }
    return PhaseSpaceField(gx, gxi, std::move(F.values));
}

void write_field_binary(std::ostream& os, const PhaseSpaceField& F) {
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(F.grid_x.dim()));
    for (const Grid* g : {&F.grid_x, &F.grid_xi}) {
        for (const Axis& a : g->axes()) {
            put<double>(os, a.half_width);
            put<std::uint64_t>(os, static_cast<std::uint64_t>(a.points));
        }
    }
    for (const cplx& v : F.values) {
        put<double>(os, v.real());
        put<double>(os, v.imag());
    }
}

PhaseSpaceField read_field_binary(std::istream& is) {
    char magic[sizeof(kMagic)];
    if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw InvalidArgument("not a binary phase-space field (bad magic)");
    }
    const auto version = get<std::uint32_t>(is);
    if (version != kVersion) throw InvalidArgument("unsupported binary field version " + std::to_string(version));
    const auto d = get<std::uint32_t>(is);
    if (d < 1 || d > 2) throw InvalidArgument("binary field dimension must be 1 or 2");
    std::vector<Grid> grids;
    for (int side = 0; side < 2; ++side) {
        std::vector<Axis> axes;
        for (std::uint32_t a = 0; a < d; ++a) {
            const double L = get<double>(is);
            const auto N = get<std::uint64_t>(is);
            if (N > (1u << 20)) throw InvalidArgument("binary field axis is implausibly large");
            axes.push_back(Axis{L, static_cast<int>(N)});
        }
        grids.push_back(Grid::from_axes(std::move(axes)));
    }
    const std::size_t n = grids[0].size() * grids[1].size();
    check_budget(n * sizeof(cplx), "binary field");
    std::vector<cplx> values(n);
    for (auto& v : values) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        v = cplx{re, im};
    }
    return PhaseSpaceField(grids[0], grids[1], std::move(values));
}

Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        cfg[key] = value;
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

SampledFunction load_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    return read_function_csv(in);
}

void save_function(const std::string& path, const SampledFunction& f) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    write_function_csv(out, f);
}

PhaseSpaceField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path);
    char first = 0;
    in.get(first);
    in.seekg(0);
    if (first == 'M') return read_field_binary(in);
    return read_field_csv(in);
}

void save_field(const std::string& path, const PhaseSpaceField& F, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw InvalidArgument("cannot write " + path);
    if (binary) {
        write_field_binary(out, F);
    } else {
        write_field_csv(out, F);
    }
}

}  // namespace modop::io
