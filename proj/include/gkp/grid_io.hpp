#ifndef GKP_GRID_IO_HPP
#define GKP_GRID_IO_HPP

#include <iosfwd>
#include <string>

#include "gkp/numerics.hpp"

namespace gkp {

/// Binary grid format. Header: x_min, dx as little-endian 64-bit floats,
/// then n as a little-endian signed 64-bit integer. Payload: n interleaved
/// (re, im) 64-bit floats.
void write_grid(const WaveGrid& grid, const std::string& path);
WaveGrid read_grid(const std::string& path);

/// CSV rows "x,re,im" with a header line, for plotting.
void write_grid_csv(const WaveGrid& grid, std::ostream& out);

}  // namespace gkp

#endif
