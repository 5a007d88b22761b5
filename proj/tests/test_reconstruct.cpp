#include <doctest.h>

#include "dctpipe/bench/jpeg_writer.hpp"
#include "dctpipe/bench/synth.hpp"
#include "dctpipe/jpeg/decoder.hpp"
#include "dctpipe/jpeg/reconstruct.hpp"
#include "dctpipe/pipeline.hpp"
#include "reference_codec.hpp"

using namespace dctpipe;

namespace {

std::vector<std::uint8_t> synth_jpeg(int index, int width, int height, int quality,
                                     bench::Subsampling sub, bool gray = false) {
    const bench::SynthImage img = bench::make_synth_image(index, 123, width, height, gray);
    return gray ? bench::encode_jpeg_gray(img.pixels.data(), width, height, quality)
                : bench::encode_jpeg_rgb(img.pixels.data(), width, height, quality, sub);
}

int max_abs_diff(const jpeg::RgbImage& mine, const refcodec::RefImage& ref) {
    REQUIRE(mine.width == ref.width);
    REQUIRE(mine.height == ref.height);
    int worst = 0;
    for (int y = 0; y < mine.height; ++y)
        for (int x = 0; x < mine.width; ++x)
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(static_cast<int>(mine.at(x, y, c)) -
                                                 static_cast<int>(ref.at(x, y, c))));
    return worst;
}

}  // namespace

TEST_CASE("DC-only blocks reconstruct to a constant plane") {
    std::array<std::uint16_t, 64> ones;
    ones.fill(1);
    // one grayscale 8x8 block with dequantized DC = 8 * 20
    std::vector<std::vector<std::int16_t>> payload(1);
    payload[0].assign(64, 0);
    payload[0][0] = 160;
    const auto bytes = refcodec::encode_with_coefficients(8, 8, false, true, payload, ones, ones);
    const jpeg::RgbImage img = decode_to_rgb(bytes);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            for (int c = 0; c < 3; ++c) CHECK(static_cast<int>(img.at(x, y, c)) == 148);  // 20 + 128
}

TEST_CASE("all-zero coefficients reconstruct to uniform mid-gray") {
    std::array<std::uint16_t, 64> ones;
    ones.fill(1);
    std::vector<std::vector<std::int16_t>> payload(3);
    payload[0].assign(4 * 64, 0);
    payload[1].assign(64, 0);
    payload[2].assign(64, 0);
    const auto bytes = refcodec::encode_with_coefficients(16, 16, true, false, payload, ones, ones);
    const jpeg::RgbImage img = decode_to_rgb(bytes);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            for (int c = 0; c < 3; ++c) CHECK(static_cast<int>(img.at(x, y, c)) == 128);
}

TEST_CASE("full decode agrees with the reference decoder within +-2") {
    struct Case {
        int index, width, height, quality;
        bench::Subsampling sub;
        bool gray;
    };
    const Case cases[] = {
        {0, 224, 224, 25, bench::Subsampling::S420, false},
        {1, 224, 224, 100, bench::Subsampling::S444, false},
        {2, 96, 72, 75, bench::Subsampling::S420, false},
        {3, 57, 43, 50, bench::Subsampling::S420, false},
        {4, 64, 64, 90, bench::Subsampling::S444, true},
    };
    for (const auto& c : cases) {
        const auto bytes = synth_jpeg(c.index, c.width, c.height, c.quality, c.sub, c.gray);
        const jpeg::RgbImage mine = decode_to_rgb(bytes);
        const refcodec::RefImage ref = refcodec::decode_rgb(bytes);
        const int diff = max_abs_diff(mine, ref);
        CAPTURE(c.index);
        CHECK(diff <= 2);
    }
}

TEST_CASE("partial decode performs zero inverse DCTs") {
    const auto bytes = synth_jpeg(9, 112, 112, 75, bench::Subsampling::S420);
    const auto before = jpeg::idct_block_count();
    const DctTensor t = decode_to_tensor(bytes);
    CHECK(t.channels() == 192);
    CHECK(jpeg::idct_block_count() == before);

    (void)decode_to_rgb(bytes);
    // 14x14 luma blocks + 2 x 7x7 chroma blocks
    CHECK(jpeg::idct_block_count() == before + 196 + 2 * 49);
}

TEST_CASE("reconstruct requires dequantized grids") {
    const auto bytes = synth_jpeg(10, 32, 32, 80, bench::Subsampling::S444);
    const jpeg::ParsedJpeg parsed = jpeg::parse_headers(bytes);
    const auto grids = jpeg::decode_coefficients(parsed, bytes);
    CHECK_THROWS_AS((void)jpeg::reconstruct_rgb(parsed, grids), Error);
}
