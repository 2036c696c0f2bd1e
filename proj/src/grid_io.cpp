#include "gkp/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace gkp {

namespace {

static_assert(std::endian::native == std::endian::little,
              "grid format assumes a little-endian host");

void put_f64(std::ostream& out, double x) {
    out.write(reinterpret_cast<const char*>(&x), sizeof(x));
}

void put_i64(std::ostream& out, std::int64_t x) {
    out.write(reinterpret_cast<const char*>(&x), sizeof(x));
}

double get_f64(std::istream& in) {
    double x;
    in.read(reinterpret_cast<char*>(&x), sizeof(x));
    return x;
}

std::int64_t get_i64(std::istream& in) {
    std::int64_t x;
    in.read(reinterpret_cast<char*>(&x), sizeof(x));
    return x;
}

}  // namespace

void write_grid(const WaveGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_grid: cannot open " + path);
    put_f64(out, grid.x_min);
    put_f64(out, grid.dx);
    put_i64(out, static_cast<std::int64_t>(grid.size()));
    for (const auto& a : grid.amp) {
        put_f64(out, a.real());
        put_f64(out, a.imag());
    }
    if (!out) throw std::runtime_error("write_grid: write failed for " + path);
}

WaveGrid read_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_grid: cannot open " + path);
    WaveGrid g;
    g.x_min = get_f64(in);
    g.dx = get_f64(in);
    const std::int64_t n = get_i64(in);
    if (!in || n < 0 || n > (std::int64_t{1} << 30))
        throw std::runtime_error("read_grid: corrupt header in " + path);
    g.amp.resize(static_cast<std::size_t>(n));
    for (auto& a : g.amp) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        a = {re, im};
    }
    if (!in) throw std::runtime_error("read_grid: truncated payload in " + path);
    return g;
}

void write_grid_csv(const WaveGrid& grid, std::ostream& out) {
    out << "x,re_amplitude,im_amplitude\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto& a = grid.amp[j];
        out << grid.x_at(j) << ',' << a.real() << ',' << a.imag() << '\n';
    }
}

}  // namespace gkp
