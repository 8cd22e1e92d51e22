#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "modop/grid.hpp"

namespace modop::io {

// CSV with a header row; coordinates then re, im, 17 significant digits.
//   d = 1 function: x,re,im        d = 2 function: x1,x2,re,im
//   d = 1 field:    x,xi,re,im     d = 2 field:    x1,x2,xi1,xi2,re,im
void write_function_csv(std::ostream& os, const SampledFunction& f);
void write_field_csv(std::ostream& os, const PhaseSpaceField& F);

// Grids are recovered from the coordinate columns and must be valid grids.
SampledFunction read_function_csv(std::istream& is);
PhaseSpaceField read_field_csv(std::istream& is);

// Binary field: "MODOPPSF", u32 version (1), u32 d, then for grid_x and
// grid_xi each axis as (f64 half_width, u64 points), then the values as
// little-endian f64 (re, im) pairs in row-major order.
void write_field_binary(std::ostream& os, const PhaseSpaceField& F);
PhaseSpaceField read_field_binary(std::istream& is);

// Flat `key = value` lines; `#` starts a comment; later keys override earlier ones.
using Config = std::map<std::string, std::string>;
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

SampledFunction load_function(const std::string& path);
void save_function(const std::string& path, const SampledFunction& f);
PhaseSpaceField load_field(const std::string& path);
void save_field(const std::string& path, const PhaseSpaceField& F, bool binary = false);

std::string format_double(double v);

}  // namespace modop::io
