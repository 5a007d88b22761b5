#pragma once

#include <cstdint>
#include <vector>

namespace dctpipe::bench {

enum class Subsampling { S444, S420 };

/// Baseline JPEG encoding via the reference codec; used for corpus
/// preparation and the synthetic corpus generator, never on the decode path.
std::vector<std::uint8_t> encode_jpeg_rgb(const std::uint8_t* rgb, int width, int height,
                                          int quality, Subsampling subsampling,
                                          int restartIntervalMcus = 0);
std::vector<std::uint8_t> encode_jpeg_gray(const std::uint8_t* gray, int width, int height,
                                           int quality);

}  // namespace dctpipe::bench
