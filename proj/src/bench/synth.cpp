#include "dctpipe/bench/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "dctpipe/bench/jpeg_writer.hpp"
#include "dctpipe/error.hpp"

namespace dctpipe::bench {

namespace fs = std::filesystem;

SynthImage make_synth_image(int index, std::uint64_t seed, int width, int height, bool gray) {
    SynthImage img;
    img.width = width;
    img.height = height;
    img.gray = gray;
    img.pixels.resize(static_cast<std::size_t>(width) * height * (gray ? 1 : 3));

    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1)));
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    const double angle = unit() * 2.0 * std::numbers::pi;
    const double freqX = 1.0 + unit() * 6.0;
    const double freqY = 1.0 + unit() * 6.0;
    const double noiseAmp = 4.0 + unit() * 24.0;
    const double blobX = unit() * width;
    const double blobY = unit() * height;
    const double blobR = 0.15 * std::min(width, height) * (0.5 + unit());
    const double baseR = 40 + unit() * 120, baseG = 40 + unit() * 120, baseB = 40 + unit() * 120;

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double u = static_cast<double>(x) / width;
            const double v = static_cast<double>(y) / height;
            const double grad = 80.0 * (u * std::cos(angle) + v * std::sin(angle));
            const double wave = 24.0 * std::sin(2.0 * std::numbers::pi * freqX * u) *
                                std::cos(2.0 * std::numbers::pi * freqY * v);
            const double d = std::hypot(x - blobX, y - blobY);
            const double blob = 60.0 * std::exp(-(d * d) / (2.0 * blobR * blobR));
            const double noise = noiseAmp * (unit() - 0.5);
            auto sample = [&](double base, double phase) {
                const double val = base + grad + wave * std::cos(phase) + blob + noise;
                return static_cast<std::uint8_t>(val < 0 ? 0 : (val > 255 ? 255 : val));
            };
            if (gray) {
                img.pixels[static_cast<std::size_t>(y) * width + x] = sample(baseR, 0.0);
            } else {
                const std::size_t base = (static_cast<std::size_t>(y) * width + x) * 3;
                img.pixels[base] = sample(baseR, 0.0);
                img.pixels[base + 1] = sample(baseG, 1.1);
                img.pixels[base + 2] = sample(baseB, 2.3);
            }
        }
    }
    return img;
}

std::vector<std::string> generate_corpus(const std::string& dir, int count, std::uint64_t seed,
                                         int size) {
    if (count < 1) throw Error(ErrorCode::EmptyCorpus, "corpus count must be positive");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::UnwritableOutput, "cannot create directory " + dir);

    static const int qualities[4] = {25, 50, 75, 100};
    std::ofstream manifest(fs::path(dir) / "manifest.jsonl");
    if (!manifest) throw Error(ErrorCode::UnwritableOutput, "cannot write manifest in " + dir);

    std::vector<std::string> paths;
    paths.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const int quality = qualities[i % 4];
        const bool gray = i % 8 == 7;
        const Subsampling sub = i % 2 == 0 ? Subsampling::S420 : Subsampling::S444;
        const SynthImage img = make_synth_image(i, seed, size, size, gray);
        const std::vector<std::uint8_t> bytes =
            gray ? encode_jpeg_gray(img.pixels.data(), size, size, quality)
                 : encode_jpeg_rgb(img.pixels.data(), size, size, quality, sub);

        char name[64];
        std::snprintf(name, sizeof(name), "synth_%03d_q%d%s.jpg", i, quality, gray ? "_gray" : "");
        const fs::path path = fs::path(dir) / name;
        std::ofstream out(path, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + path.string());
        manifest << "{\"file\":\"" << name << "\",\"bytes\":" << bytes.size() << ",\"width\":" << size
                 << ",\"height\":" << size << ",\"quality\":" << quality
                 << ",\"gray\":" << (gray ? "true" : "false") << "}\n";
        paths.push_back(path.string());
    }
    return paths;
}

}  // namespace dctpipe::bench
