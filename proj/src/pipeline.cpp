#include "dctpipe/pipeline.hpp"

namespace dctpipe {

namespace {

/// Row-scales a rearranged tensor by the zigzag-aligned quantization entries;
/// equivalent to dequantizing the grid first, but touches only the retained
/// channels.
void dequantize_channels(DctTensor& t, const std::array<std::uint16_t, 64>& table) {
    for (Eigen::Index ch = 0; ch < t.channels(); ++ch)
        t.data.row(ch) *= static_cast<float>(table[t.channelMeta[static_cast<std::size_t>(ch)].freqIndex]);
}

}  // namespace

DctTensor decode_to_tensor(std::span<const std::uint8_t> bytes, const DecodeOptions& opts) {
    const jpeg::ParsedJpeg parsed = jpeg::parse_headers(bytes);
    const std::vector<CoeffBlockGrid> grids = jpeg::decode_coefficients(parsed, bytes);

    std::optional<std::vector<int>> retained;
    if (opts.fbs) retained = opts.fbs->indices();

    auto toTensor = [&](std::size_t i) {
        DctTensor t = retained ? rearrange<float>(grids[i], *retained) : rearrange<float>(grids[i]);
        if (!opts.keepQuantized)
            dequantize_channels(
                t, parsed.quantTables[static_cast<std::size_t>(parsed.components[i].quantTableId)].values);
        return t;
    };

    DctTensor luma = toTensor(0);
    luma.cropWidth = static_cast<std::uint32_t>(parsed.width);
    luma.cropHeight = static_cast<std::uint32_t>(parsed.height);
    if (parsed.grayscale() || opts.lumaOnly) return luma;

    DctTensor cb = toTensor(1);
    DctTensor cr = toTensor(2);
    if (parsed.subsampled420()) {
        cb = upsample_chroma(cb, luma.rows, luma.cols);
        cr = upsample_chroma(cr, luma.rows, luma.cols);
    }
    return assemble(luma, cb, cr);
}

jpeg::RgbImage decode_to_rgb(std::span<const std::uint8_t> bytes) {
    const jpeg::ParsedJpeg parsed = jpeg::parse_headers(bytes);
    std::vector<CoeffBlockGrid> grids = jpeg::decode_coefficients(parsed, bytes);
    for (std::size_t i = 0; i < grids.size(); ++i)
        grids[i] = dequantize(
            grids[i],
            parsed.quantTables[static_cast<std::size_t>(parsed.components[i].quantTableId)].values);
    return jpeg::reconstruct_rgb(parsed, grids);
}

}  // namespace dctpipe
