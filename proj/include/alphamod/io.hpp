#ifndef ALPHAMOD_IO_HPP
#define ALPHAMOD_IO_HPP

#include <string>

#include "alphamod/cover.hpp"
#include "alphamod/grid.hpp"

namespace alphamod {

// Binary signal container: bytes "AMOD1", u8 dim, u32 N, f64 L, then
// N^dim (re, im) f64 pairs in row-major order, all little-endian.
void write_amod(const std::string& path, const GridSignal& f);
GridSignal read_amod(const std::string& path);

// Text container for dim-1 signals, one "x,re,im" line per sample.
void write_csv_signal(const std::string& path, const GridSignal& f);
// Reads a dim-1 CSV; the grid is reconstructed from the sample positions.
GridSignal read_csv_signal(const std::string& path);

// Dispatch on extension: ".amod" or ".csv".
GridSignal read_signal(const std::string& path);
void write_signal(const std::string& path, const GridSignal& f);

std::string cover_report_json(const CoverReport& report, const AlphaCover& cover);

// CoverParams as a flat JSON object (the `--cover` input of the CLI).
std::string cover_params_json(const CoverParams& params);
CoverParams parse_cover_params_json(const std::string& text);

}  // namespace alphamod

#endif
