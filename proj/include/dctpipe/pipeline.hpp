#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dctpipe/dct_tensor.hpp"
#include "dctpipe/jpeg/decoder.hpp"
#include "dctpipe/jpeg/reconstruct.hpp"

namespace dctpipe {

struct DecodeOptions {
    bool keepQuantized = false;        // skip dequantization, valueKind stays integer
    bool lumaOnly = false;             // drop chroma even for color streams
    std::optional<FbsSpec> fbs;        // band selection, applied per component before upsampling
};

/// Partial decode straight to the network-facing tensor: entropy decode,
/// dequantize (unless kept quantized), frequency-channel rearrangement with
/// optional band selection, chroma upsampling, channel-wise concatenation.
/// Grayscale streams yield a luma-only tensor.
DctTensor decode_to_tensor(std::span<const std::uint8_t> bytes, const DecodeOptions& opts = {});

/// Full decode to RGB through the coefficient path (timing baseline).
jpeg::RgbImage decode_to_rgb(std::span<const std::uint8_t> bytes);

}  // namespace dctpipe
