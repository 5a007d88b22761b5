#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dctpipe/coeff_grid.hpp"
#include "dctpipe/jpeg/parsed_jpeg.hpp"

namespace dctpipe::jpeg {

/// Parses marker segments up to and including SOS. Accepts baseline
/// sequential (SOF0), 8-bit, 1 or 3 components, 4:4:4 or 4:2:0 only;
/// everything else is a typed rejection.
ParsedJpeg parse_headers(std::span<const std::uint8_t> stream);

/// Entropy-decodes the scan into one quantized coefficient grid per
/// component: Huffman decoding, DC prediction resolution (reset at restart
/// markers), dezigzag layout. No inverse DCT is performed.
std::vector<CoeffBlockGrid> decode_coefficients(const ParsedJpeg& jpeg,
                                                std::span<const std::uint8_t> stream);

}  // namespace dctpipe::jpeg
