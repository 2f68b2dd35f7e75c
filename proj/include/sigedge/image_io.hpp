#pragma once

#include <string>

#include "sigedge/grid.hpp"

namespace sigedge::io {

/// Lossless grid format: the ASCII line "SIGEDGE-F64 1 <rows> <cols>\n"
/// followed by rows*cols IEEE-754 doubles, little endian, row-major.
void write_f64(const std::string& path, const Image& img);
Image read_f64(const std::string& path);

/// 8-bit PGM. Writes binary P5 (maxval 255); reads P5 and ASCII P2 with any
/// maxval <= 255.
void write_pgm(const std::string& path, const Mask& img);
Mask read_pgm(const std::string& path);

/// Binary mask as PGM with set pixels at 255.
void write_mask_pgm(const std::string& path, const Mask& mask);

/// Linear min-max scaling of a real image to 0..255.
Mask to_grey(const Image& img, double* lo = nullptr, double* hi = nullptr);

/// Reads a PGM as real values in [0, 1] (value / maxval) or a .f64 grid,
/// depending on the file's magic bytes.
Image read_image(const std::string& path);

/// Writes `contents` to `path` through a temporary file and rename.
void write_text_atomic(const std::string& path, const std::string& contents);

}  // namespace sigedge::io
