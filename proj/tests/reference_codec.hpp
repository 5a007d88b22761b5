#pragma once

// Test-only oracle built on the system reference codec (libjpeg). The decoder
// under test never touches it; these helpers exist so tests can compare
// against an independent implementation and craft streams with known
// coefficient payloads.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace refcodec {

struct RefImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // interleaved, row-major

    std::uint8_t at(int x, int y, int channel) const {
        return rgb[static_cast<std::size_t>((y * width + x) * 3 + channel)];
    }
};

/// Reference full decode to RGB with plain (non-fancy) chroma upsampling and
/// the accurate integer IDCT.
RefImage decode_rgb(std::span<const std::uint8_t> bytes);

struct RefComponent {
    int blockRows = 0;   // unpadded block extent (ceil of sample dims / 8)
    int blockCols = 0;
    int hSampling = 1;
    int vSampling = 1;
    std::array<std::uint16_t, 64> quant{};   // zigzag order
    std::vector<std::int16_t> blocks;        // blockRows*blockCols*64, zigzag order
};

struct RefCoefficients {
    int width = 0;
    int height = 0;
    std::vector<RefComponent> components;
};

/// Quantized DCT coefficients straight from the reference decoder, converted
/// to zigzag order.
RefCoefficients read_coefficients(std::span<const std::uint8_t> bytes);

/// Lossless recompress (decode coefficients, re-encode them); exercises the
/// round-trip path without touching pixel data.
std::vector<std::uint8_t> recompress(std::span<const std::uint8_t> bytes);

/// Crafts a baseline stream carrying exactly the given quantized coefficient
/// blocks (zigzag order, one vector per component, MCU-padded extent).
/// For color: component 0 quantizes with lumaQuant, 1 and 2 with chromaQuant.
std::vector<std::uint8_t> encode_with_coefficients(
    int width, int height, bool subsample420, bool gray,
    const std::vector<std::vector<std::int16_t>>& zigzagBlocks,
    const std::array<std::uint16_t, 64>& lumaQuant,
    const std::array<std::uint16_t, 64>& chromaQuant, int restartIntervalMcus = 0);

}  // namespace refcodec
