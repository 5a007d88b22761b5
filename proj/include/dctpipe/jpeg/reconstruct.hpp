#pragma once

#include <cstdint>
#include <vector>

#include "dctpipe/coeff_grid.hpp"
#include "dctpipe/jpeg/parsed_jpeg.hpp"

namespace dctpipe::jpeg {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // interleaved RGB, row-major

    std::uint8_t at(int x, int y, int channel) const {
        return pixels[static_cast<std::size_t>((y * width + x) * 3 + channel)];
    }
};

/// Full decode tail: per-block double-precision separable IDCT, +128 level
/// shift, clamp, nearest-neighbor chroma upsampling, JFIF YCbCr -> RGB.
/// Grids must be dequantized. Used as the timing baseline and the surface the
/// reference-decoder oracle compares against.
RgbImage reconstruct_rgb(const ParsedJpeg& jpeg, const std::vector<CoeffBlockGrid>& grids);

/// Running count of 8x8 inverse DCTs performed by this process. The partial
/// decode path must leave it untouched.
std::uint64_t idct_block_count();

}  // namespace dctpipe::jpeg
