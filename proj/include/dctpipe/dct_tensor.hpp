#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "dctpipe/coeff_grid.hpp"
#include "dctpipe/error.hpp"

namespace dctpipe {

/// Channel provenance: which color component and which zigzag frequency a
/// tensor channel came from. Reduced tensors use `mixed_component`.
struct ChannelMeta {
    std::uint8_t componentCode = 0;  // 0=Y, 1=Cb, 2=Cr, 255=mixed
    std::uint8_t freqIndex = 0;      // zigzag frequency index 0..63

    bool operator==(const ChannelMeta&) const = default;
};

inline constexpr std::uint8_t mixed_component = 255;

/// Frequency-channel-rearranged tensor: channels x blockRows x blockCols.
///
/// Dense storage is a channels x (rows*cols) matrix, spatial positions
/// flattened row-major, so pointwise channel maps are plain matrix products.
template <typename Scalar>
struct DctTensorT {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    Matrix data;  // channels x (rows*cols)
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::vector<ChannelMeta> channelMeta;
    // true pixel extent of the image the tensor was cut from
    std::uint32_t cropWidth = 0;
    std::uint32_t cropHeight = 0;

    Eigen::Index channels() const { return data.rows(); }
    Eigen::Index positions() const { return rows * cols; }

    Scalar at(Eigen::Index channel, Eigen::Index r, Eigen::Index c) const {
        return data(channel, r * cols + c);
    }
    Scalar& at(Eigen::Index channel, Eigen::Index r, Eigen::Index c) {
        return data(channel, r * cols + c);
    }
};

using DctTensor = DctTensorT<float>;

/// Frequency band selection spec; `indices()` yields the retained zigzag set.
struct FbsSpec {
    enum class Strategy { LowestN, MedianBand, HighestBand, Extremes, ExplicitList };

    Strategy strategy = Strategy::LowestN;
    int n = 64;                      // retained count for LowestN
    std::vector<int> explicitList;   // for ExplicitList

    static FbsSpec lowest(int n) { return {Strategy::LowestN, n, {}}; }
    static FbsSpec median() { return {Strategy::MedianBand, 32, {}}; }
    static FbsSpec highest() { return {Strategy::HighestBand, 32, {}}; }
    static FbsSpec extremes() { return {Strategy::Extremes, 32, {}}; }
    static FbsSpec explicit_list(std::vector<int> v) { return {Strategy::ExplicitList, 0, std::move(v)}; }

    /// Retained zigzag indices, ascending, duplicate-free.
    std::vector<int> indices() const {
        std::vector<int> out;
        switch (strategy) {
            case Strategy::LowestN: {
                if (n < 1 || n > 64)
                    throw Error(ErrorCode::IndexOutOfRange, "lowest-n requires 1 <= n <= 64, got " + std::to_string(n));
                for (int k = 0; k < n; ++k) out.push_back(k);
                break;
            }
            case Strategy::MedianBand:
                for (int k = 16; k < 48; ++k) out.push_back(k);
                break;
            case Strategy::HighestBand:
                for (int k = 32; k < 64; ++k) out.push_back(k);
                break;
            case Strategy::Extremes:
                for (int k = 0; k < 16; ++k) out.push_back(k);
                for (int k = 48; k < 64; ++k) out.push_back(k);
                break;
            case Strategy::ExplicitList: {
                out = explicitList;
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                if (out.empty())
                    throw Error(ErrorCode::IndexOutOfRange, "explicit list is empty");
                for (int k : out)
                    if (k < 0 || k > 63)
                        throw Error(ErrorCode::IndexOutOfRange, "zigzag index " + std::to_string(k) + " outside 0..63");
                break;
            }
        }
        return out;
    }
};

/// Rearranges a coefficient grid into a 64-channel tensor: channel k at (r,c)
/// equals zigzag coefficient k of block (r,c).
template <typename Scalar = float>
DctTensorT<Scalar> rearrange(const CoeffBlockGrid& grid) {
    DctTensorT<Scalar> t;
    t.rows = grid.blockRows;
    t.cols = grid.blockCols;
    t.data = grid.blocks.transpose().template cast<Scalar>();
    t.channelMeta.resize(64);
    for (int k = 0; k < 64; ++k)
        t.channelMeta[k] = {static_cast<std::uint8_t>(grid.component), static_cast<std::uint8_t>(k)};
    t.cropWidth = static_cast<std::uint32_t>(grid.sampleWidth);
    t.cropHeight = static_cast<std::uint32_t>(grid.sampleHeight);
    return t;
}

/// Subset rearrange: only the given zigzag channels are copied out. Equivalent
/// to select(rearrange(grid), spec) but skips the discarded channels entirely.
template <typename Scalar = float>
DctTensorT<Scalar> rearrange(const CoeffBlockGrid& grid, const std::vector<int>& zigzagIndices) {
    DctTensorT<Scalar> t;
    t.rows = grid.blockRows;
    t.cols = grid.blockCols;
    t.cropWidth = static_cast<std::uint32_t>(grid.sampleWidth);
    t.cropHeight = static_cast<std::uint32_t>(grid.sampleHeight);
    t.data.resize(static_cast<Eigen::Index>(zigzagIndices.size()), t.positions());
    t.channelMeta.reserve(zigzagIndices.size());
    for (std::size_t i = 0; i < zigzagIndices.size(); ++i) {
        const int k = zigzagIndices[i];
        if (k < 0 || k > 63)
            throw Error(ErrorCode::IndexOutOfRange, "zigzag index " + std::to_string(k) + " outside 0..63");
        t.data.row(static_cast<Eigen::Index>(i)) =
            grid.blocks.col(k).transpose().template cast<Scalar>();
        t.channelMeta.push_back(
            {static_cast<std::uint8_t>(grid.component), static_cast<std::uint8_t>(k)});
    }
    return t;
}

/// Inverse of rearrange for a single-component 64-channel tensor.
template <typename Scalar>
CoeffBlockGrid inverse_rearrange(const DctTensorT<Scalar>& t, ComponentId component,
                                 bool dequantized = true) {
    if (t.channels() != 64)
        throw Error(ErrorCode::DimensionMismatch,
                    "inverse rearrange requires 64 channels, got " + std::to_string(t.channels()));
    CoeffBlockGrid grid;
    grid.component = component;
    grid.blockRows = t.rows;
    grid.blockCols = t.cols;
    grid.sampleWidth = static_cast<int>(t.cropWidth);
    grid.sampleHeight = static_cast<int>(t.cropHeight);
    grid.dequantized = dequantized;
    grid.valueKind = dequantized ? CoeffValueKind::DequantizedReal : CoeffValueKind::QuantizedInt;
    grid.blocks = t.data.transpose().template cast<float>();
    return grid;
}

/// Nearest-neighbor 2x replication in both spatial axes, cropped to the luma
/// grid dims. channelMeta is preserved.
template <typename Scalar>
DctTensorT<Scalar> upsample_chroma(const DctTensorT<Scalar>& t, Eigen::Index lumaRows,
                                   Eigen::Index lumaCols) {
    if (2 * t.rows < lumaRows || 2 * t.cols < lumaCols)
        throw Error(ErrorCode::DimensionMismatch,
                    "chroma grid " + std::to_string(t.rows) + "x" + std::to_string(t.cols) +
                        " cannot cover luma grid " + std::to_string(lumaRows) + "x" +
                        std::to_string(lumaCols) + " after 2x upsampling");
    DctTensorT<Scalar> out;
    out.rows = lumaRows;
    out.cols = lumaCols;
    out.channelMeta = t.channelMeta;
    out.cropWidth = t.cropWidth;
    out.cropHeight = t.cropHeight;
    out.data.resize(t.channels(), lumaRows * lumaCols);
    for (Eigen::Index r = 0; r < lumaRows; ++r)
        for (Eigen::Index c = 0; c < lumaCols; ++c)
            out.data.col(r * lumaCols + c) = t.data.col((r / 2) * t.cols + (c / 2));
    return out;
}

/// Channel-wise concatenation. Components must share spatial dims; channel
/// order follows the input order (Y, Cb, Cr for the standard call).
template <typename Scalar>
DctTensorT<Scalar> assemble(const std::vector<DctTensorT<Scalar>>& parts) {
    if (parts.empty()) throw Error(ErrorCode::DimensionMismatch, "assemble of zero tensors");
    const auto& first = parts.front();
    Eigen::Index channels = 0;
    for (const auto& p : parts) {
        if (p.rows != first.rows || p.cols != first.cols)
            throw Error(ErrorCode::DimensionMismatch,
                        "assemble requires a shared spatial grid; got " + std::to_string(p.rows) +
                            "x" + std::to_string(p.cols) + " vs " + std::to_string(first.rows) +
                            "x" + std::to_string(first.cols));
        channels += p.channels();
    }
    DctTensorT<Scalar> out;
    out.rows = first.rows;
    out.cols = first.cols;
    out.cropWidth = first.cropWidth;
    out.cropHeight = first.cropHeight;
    out.data.resize(channels, first.positions());
    out.channelMeta.reserve(channels);
    Eigen::Index offset = 0;
    for (const auto& p : parts) {
        out.data.middleRows(offset, p.channels()) = p.data;
        out.channelMeta.insert(out.channelMeta.end(), p.channelMeta.begin(), p.channelMeta.end());
        offset += p.channels();
    }
    return out;
}

template <typename Scalar>
DctTensorT<Scalar> assemble(const DctTensorT<Scalar>& y, const DctTensorT<Scalar>& cb,
                            const DctTensorT<Scalar>& cr) {
    return assemble<Scalar>({y, cb, cr});
}

/// Restricts channels, per component, to the spec's zigzag index set.
/// Relative channel order is preserved. Every requested index must exist for
/// every component present in the tensor.
template <typename Scalar>
DctTensorT<Scalar> select(const DctTensorT<Scalar>& t, const FbsSpec& spec) {
    const std::vector<int> wanted = spec.indices();
    std::array<bool, 64> keep{};
    for (int k : wanted) keep[static_cast<std::size_t>(k)] = true;

    // precondition: each retained index exists for each component present
    std::array<std::array<bool, 64>, 4> present{};
    for (const auto& meta : t.channelMeta) {
        int comp = meta.componentCode == mixed_component ? 3 : meta.componentCode;
        present[static_cast<std::size_t>(comp)][meta.freqIndex] = true;
    }
    for (int comp = 0; comp < 4; ++comp) {
        bool any = false;
        for (bool b : present[static_cast<std::size_t>(comp)]) any = any || b;
        if (!any) continue;
        for (int k : wanted)
            if (!present[static_cast<std::size_t>(comp)][static_cast<std::size_t>(k)])
                throw Error(ErrorCode::IndexOutOfRange,
                            "zigzag index " + std::to_string(k) + " not present for component " +
                                std::to_string(comp));
    }

    std::vector<Eigen::Index> chosen;
    for (Eigen::Index ch = 0; ch < t.channels(); ++ch)
        if (keep[t.channelMeta[static_cast<std::size_t>(ch)].freqIndex]) chosen.push_back(ch);

    DctTensorT<Scalar> out;
    out.rows = t.rows;
    out.cols = t.cols;
    out.cropWidth = t.cropWidth;
    out.cropHeight = t.cropHeight;
    out.data.resize(static_cast<Eigen::Index>(chosen.size()), t.positions());
    out.channelMeta.reserve(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        out.data.row(static_cast<Eigen::Index>(i)) = t.data.row(chosen[i]);
        out.channelMeta.push_back(t.channelMeta[static_cast<std::size_t>(chosen[i])]);
    }
    return out;
}

}  // namespace dctpipe
