#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dctpipe::bench {

struct SynthImage {
    int width = 0;
    int height = 0;
    bool gray = false;
    std::vector<std::uint8_t> pixels;  // RGB interleaved, or single plane when gray
};

/// Deterministic synthetic test image: directional gradients, a sinusoidal
/// field, a radial blob and seeded noise, so the coefficient spectrum has
/// both strong low-frequency structure and genuine high-frequency content.
SynthImage make_synth_image(int index, std::uint64_t seed, int width, int height, bool gray);

/// Writes `count` synthetic baseline JPEGs of size x size into `dir`
/// (qualities cycling 25/50/75/100, mixed 4:2:0 / 4:4:4, every eighth image
/// grayscale) plus a manifest.jsonl. Returns the file paths.
std::vector<std::string> generate_corpus(const std::string& dir, int count, std::uint64_t seed,
                                         int size = 224);

}  // namespace dctpipe::bench
