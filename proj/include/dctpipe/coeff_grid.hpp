#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "dctpipe/error.hpp"

namespace dctpipe {

enum class ComponentId : std::uint8_t { Y = 0, Cb = 1, Cr = 2 };

inline const char* component_name(ComponentId id) {
    switch (id) {
        case ComponentId::Y: return "Y";
        case ComponentId::Cb: return "Cb";
        case ComponentId::Cr: return "Cr";
    }
    return "?";
}

enum class CoeffValueKind : std::uint8_t { QuantizedInt = 0, DequantizedReal = 1 };

/// Per-component grid of 8x8 frequency blocks, channel axis in zigzag order.
///
/// Storage is (blockRows * blockCols) x 64, row-major: one block per row, the
/// 64 coefficients of a block in zigzag order (column 0 = DC). Quantized
/// coefficients are held as exactly-representable floats; baseline JPEG bounds
/// them to the signed 12-bit range so no precision is lost.
struct CoeffBlockGrid {
    using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    ComponentId component = ComponentId::Y;
    Eigen::Index blockRows = 0;
    Eigen::Index blockCols = 0;
    // true sample extent of this component (before MCU padding)
    int sampleWidth = 0;
    int sampleHeight = 0;
    bool dequantized = false;
    CoeffValueKind valueKind = CoeffValueKind::QuantizedInt;
    Matrix blocks;  // (blockRows*blockCols) x 64

    Eigen::Index block_count() const { return blockRows * blockCols; }

    float coeff(Eigen::Index row, Eigen::Index col, int zigzagIndex) const {
        return blocks(row * blockCols + col, zigzagIndex);
    }
    float& coeff(Eigen::Index row, Eigen::Index col, int zigzagIndex) {
        return blocks(row * blockCols + col, zigzagIndex);
    }
};

/// Multiplies every coefficient by its zigzag-aligned quantization entry.
/// `table` holds 64 values in zigzag order.
inline CoeffBlockGrid dequantize(const CoeffBlockGrid& grid, const std::array<std::uint16_t, 64>& table) {
    if (grid.dequantized)
        throw Error(ErrorCode::AlreadyDequantized,
                    std::string("component ") + component_name(grid.component));
    CoeffBlockGrid out = grid;
    Eigen::Matrix<float, 1, 64> scale;
    for (int k = 0; k < 64; ++k) scale(0, k) = static_cast<float>(table[k]);
    out.blocks = grid.blocks.array().rowwise() * scale.array();
    out.dequantized = true;
    out.valueKind = CoeffValueKind::DequantizedReal;
    return out;
}

}  // namespace dctpipe
