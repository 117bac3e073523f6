#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapect/fanbeam.hpp"
#include "shapect/raster.hpp"
#include "shapect/sampler.hpp"

namespace shapect::io {

/// Plain PGM (P2). white_level = 0 scales the image maximum to 255;
/// otherwise the given level maps to 255.
void write_pgm(const std::string& path, const RasterImage& img, double white_level = 0.0);

void write_image_csv(const std::string& path, const RasterImage& img);
RasterImage read_image_csv(const std::string& path);

/// CSV sinogram: header line "views,bins", then one comma-separated line of
/// bin values per view.
void write_sinogram_csv(const std::string& path, const Sinogram& s);
Sinogram read_sinogram_csv(const std::string& path);

/// Raw little-endian binary: 16-byte header (magic "SINO", u32 views,
/// u32 bins, u32 reserved) followed by views*bins float64 values.
void write_sinogram_bin(const std::string& path, const Sinogram& s);
Sinogram read_sinogram_bin(const std::string& path);

/// Closed polygonal path; the raster frame (origin lower-left, y up) maps
/// onto the SVG frame (y down) so overlays align pixel-exact.
void write_svg(const std::string& path, const std::vector<Vec2>& polyline, double side);

/// Append-only chain CSV (iteration, components..., log_post,
/// accepted_stage). from_iteration > 0 appends without rewriting the header.
void append_chain_csv(const std::string& path, const Chain& chain, std::int64_t from_iteration = 0);
Chain read_chain_csv(const std::string& path);

void write_histogram_csv(const std::string& path, const std::vector<double>& values, int bins);
void write_trace_csv(const std::string& path, const std::vector<double>& values, int thin = 1);

/// Quick-look line plot rendered as a PGM bitmap.
void write_trace_pgm(const std::string& path, const std::vector<double>& values, int width = 512,
                     int height = 256);
void write_histogram_pgm(const std::string& path, const std::vector<double>& values, int bins = 60,
                         int width = 512, int height = 256);

} // namespace shapect::io
