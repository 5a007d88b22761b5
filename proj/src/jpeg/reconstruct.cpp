#include "dctpipe/jpeg/reconstruct.hpp"

#include <Eigen/Core>
#include <atomic>
#include <cmath>
#include <numbers>

#include "dctpipe/error.hpp"
#include "dctpipe/zigzag.hpp"

namespace dctpipe::jpeg {

namespace {

using Block8d = Eigen::Matrix<double, 8, 8>;
using PlaneF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::atomic<std::uint64_t> g_idctBlocks{0};

/// Orthonormal IDCT basis: B(x,u) = 0.5 * C(u) * cos((2x+1) u pi / 16).
const Block8d& idct_basis() {
    static const Block8d basis = [] {
        Block8d b;
        for (int x = 0; x < 8; ++x)
            for (int u = 0; u < 8; ++u) {
                const double cu = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
                b(x, u) = 0.5 * cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
            }
        return b;
    }();
    return basis;
}

/// samples = B * F * B^T for one block given in zigzag order.
Block8d idct_8x8(const float* zigzagCoeffs) {
    Block8d freq = Block8d::Zero();
    for (int z = 0; z < 64; ++z) {
        const int natural = zigzag_natural_order[static_cast<std::size_t>(z)];
        freq(natural / 8, natural % 8) = static_cast<double>(zigzagCoeffs[z]);
    }
    g_idctBlocks.fetch_add(1, std::memory_order_relaxed);
    const Block8d& basis = idct_basis();
    return basis * freq * basis.transpose();
}

/// IDCT of a whole grid, level-shifted and clamped, cropped to the true
/// sample extent of the component.
PlaneF decode_plane(const CoeffBlockGrid& grid) {
    PlaneF plane(grid.sampleHeight, grid.sampleWidth);
    for (Eigen::Index br = 0; br < grid.blockRows; ++br) {
        for (Eigen::Index bc = 0; bc < grid.blockCols; ++bc) {
            const Block8d samples = idct_8x8(grid.blocks.row(br * grid.blockCols + bc).data());
            for (int y = 0; y < 8; ++y) {
                const Eigen::Index py = br * 8 + y;
                if (py >= plane.rows()) break;
                for (int x = 0; x < 8; ++x) {
                    const Eigen::Index px = bc * 8 + x;
                    if (px >= plane.cols()) break;
                    const double v = samples(y, x) + 128.0;
                    plane(py, px) = static_cast<float>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
                }
            }
        }
    }
    return plane;
}

/// Nearest-neighbor 2x replication cropped to the luma extent.
PlaneF upsample_plane(const PlaneF& plane, int width, int height) {
    PlaneF out(height, width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out(y, x) = plane(y / 2, x / 2);
    return out;
}

std::uint8_t to_byte(float v) {
    const float r = std::round(v);
    return static_cast<std::uint8_t>(r < 0.f ? 0.f : (r > 255.f ? 255.f : r));
}

}  // namespace

std::uint64_t idct_block_count() { return g_idctBlocks.load(std::memory_order_relaxed); }

RgbImage reconstruct_rgb(const ParsedJpeg& jpeg, const std::vector<CoeffBlockGrid>& grids) {
    if (grids.size() != jpeg.components.size())
        throw Error(ErrorCode::InvalidState, "grid count does not match frame components");
    for (const auto& grid : grids)
        if (!grid.dequantized)
            throw Error(ErrorCode::InvalidState, "reconstruct requires dequantized grids");

    RgbImage image;
    image.width = jpeg.width;
    image.height = jpeg.height;
    image.pixels.resize(static_cast<std::size_t>(jpeg.width) * jpeg.height * 3);

    if (jpeg.grayscale()) {
        const PlaneF y = decode_plane(grids[0]);
        for (int row = 0; row < jpeg.height; ++row)
            for (int col = 0; col < jpeg.width; ++col) {
                const std::uint8_t v = to_byte(y(row, col));
                const std::size_t base = static_cast<std::size_t>(row * jpeg.width + col) * 3;
                image.pixels[base] = image.pixels[base + 1] = image.pixels[base + 2] = v;
            }
        return image;
    }

    const PlaneF yPlane = decode_plane(grids[0]);
    PlaneF cbPlane = decode_plane(grids[1]);
    PlaneF crPlane = decode_plane(grids[2]);
    if (jpeg.subsampled420()) {
        cbPlane = upsample_plane(cbPlane, jpeg.width, jpeg.height);
        crPlane = upsample_plane(crPlane, jpeg.width, jpeg.height);
    }

    // JFIF conversion matrix
    for (int row = 0; row < jpeg.height; ++row) {
        for (int col = 0; col < jpeg.width; ++col) {
            const float y = yPlane(row, col);
            const float cb = cbPlane(row, col) - 128.f;
            const float cr = crPlane(row, col) - 128.f;
            const std::size_t base = static_cast<std::size_t>(row * jpeg.width + col) * 3;
            image.pixels[base] = to_byte(y + 1.402f * cr);
            image.pixels[base + 1] = to_byte(y - 0.344136f * cb - 0.714136f * cr);
            image.pixels[base + 2] = to_byte(y + 1.772f * cb);
        }
    }
    return image;
}

}  // namespace dctpipe::jpeg
