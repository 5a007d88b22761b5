#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "dctpipe/coeff_grid.hpp"

namespace dctpipe::jpeg {

struct QuantTable {
    bool defined = false;
    std::array<std::uint16_t, 64> values{};  // zigzag order
};

struct HuffTable {
    bool defined = false;
    std::array<std::uint8_t, 16> counts{};
    std::vector<std::uint8_t> symbols;
    // canonical decode tables, index = code length 1..16
    std::array<std::int32_t, 17> mincode{};
    std::array<std::int32_t, 17> maxcode{};  // -1 where no codes of that length
    std::array<std::int32_t, 17> valptr{};
};

struct FrameComponent {
    std::uint8_t id = 0;
    int hSampling = 1;
    int vSampling = 1;
    int quantTableId = 0;
    int dcTableId = -1;  // filled at SOS
    int acTableId = -1;
    int sampleWidth = 0;   // true sample extent, sampling accounted for
    int sampleHeight = 0;
    int blockRows = 0;     // MCU-padded block grid extent
    int blockCols = 0;
    ComponentId role = ComponentId::Y;
};

/// Decoded JPEG structural state: frame geometry, sampling, quantization and
/// Huffman tables, restart interval, and the offset of the entropy segment.
struct ParsedJpeg {
    int width = 0;
    int height = 0;
    int precision = 8;
    std::vector<FrameComponent> components;
    std::array<QuantTable, 4> quantTables;
    std::array<HuffTable, 4> dcTables;
    std::array<HuffTable, 4> acTables;
    int restartInterval = 0;  // in MCUs, 0 = none

    int hMax = 1;
    int vMax = 1;
    int mcuCols = 0;
    int mcuRows = 0;
    std::size_t entropyOffset = 0;  // byte offset just past the SOS header

    bool grayscale() const { return components.size() == 1; }
    bool subsampled420() const {
        return components.size() == 3 && components[0].hSampling == 2 && components[0].vSampling == 2;
    }
};

}  // namespace dctpipe::jpeg
