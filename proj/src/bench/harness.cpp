#include "dctpipe/bench/harness.hpp"

#include <json.hpp>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "dctpipe/bench/jpeg_writer.hpp"
#include "dctpipe/error.hpp"
#include "dctpipe/pipeline.hpp"

namespace dctpipe::bench {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

std::vector<std::string> list_jpegs(const std::string& dir) {
    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path().string());
    }
    if (ec) throw Error(ErrorCode::EmptyCorpus, "cannot read corpus directory " + dir);
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::EmptyCorpus, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double estimate_timer_granularity_ns() {
    double best = 1e9;
    for (int i = 0; i < 256; ++i) {
        const auto t0 = Clock::now();
        auto t1 = Clock::now();
        while (t1 == t0) t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double, std::nano>(t1 - t0).count());
    }
    return best;
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
    mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
}

/// Fixed, mode-independent downstream workload standing in for the network:
/// each decoded representation is folded into a 64 x grid x grid accumulator
/// by a seeded channel map (cheap), then one seeded 3x3 convolution stack
/// runs once per batch. Its output feeds a checksum so nothing is elided.
class PipelineStandIn {
public:
    explicit PipelineStandIn(int grid) : grid_(grid), accum_(64, grid * grid) {
        std::mt19937_64 rng(0xD0C7);
        auto draw = [&] { return static_cast<float>(static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5); };
        for (int c = 0; c < 256; ++c) foldWeights_[c] = 0.5f + 0.5f * draw();
        conv_.resize(9 * 64, 64);
        for (Eigen::Index r = 0; r < conv_.rows(); ++r)
            for (Eigen::Index c = 0; c < conv_.cols(); ++c) conv_(r, c) = draw() * 0.05f;
        reset();
    }

    void reset() { accum_.setZero(); }

    void fold(const DctTensor& t) {
        const Eigen::Index positions = std::min<Eigen::Index>(t.positions(), accum_.cols());
        for (Eigen::Index ch = 0; ch < t.channels(); ++ch)
            accum_.row(ch % 64).head(positions) +=
                foldWeights_[ch % 256] * t.data.row(ch).head(positions);
    }

    void fold(const jpeg::RgbImage& img) {
        // 8x8 block means per color channel land on the accumulator grid
        const int rows = std::min(grid_, img.height / 8);
        const int cols = std::min(grid_, img.width / 8);
        for (int ch = 0; ch < 3; ++ch) {
            for (int br = 0; br < rows; ++br) {
                for (int bc = 0; bc < cols; ++bc) {
                    int sum = 0;
                    for (int y = 0; y < 8; ++y)
                        for (int x = 0; x < 8; ++x) sum += img.at(bc * 8 + x, br * 8 + y, ch);
                    accum_(ch, br * grid_ + bc) += foldWeights_[ch] * static_cast<float>(sum) / 64.f;
                }
            }
        }
    }

    /// One 3x3/pad-1 convolution 64 -> 64 on the accumulator plus ReLU.
    double run() {
        Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cols(9 * 64,
                                                                                   grid_ * grid_);
        cols.setZero();
        for (int ky = -1; ky <= 1; ++ky)
            for (int kx = -1; kx <= 1; ++kx) {
                const int tap = (ky + 1) * 3 + (kx + 1);
                for (int y = 0; y < grid_; ++y) {
                    const int sy = y + ky;
                    if (sy < 0 || sy >= grid_) continue;
                    for (int x = 0; x < grid_; ++x) {
                        const int sx = x + kx;
                        if (sx < 0 || sx >= grid_) continue;
                        cols.block(tap * 64, y * grid_ + x, 64, 1) =
                            accum_.col(sy * grid_ + sx);
                    }
                }
            }
        Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
            (conv_.transpose() * cols).cwiseMax(0.f);
        return static_cast<double>(out.sum());
    }

private:
    int grid_;
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> accum_;
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> conv_;
    float foldWeights_[256];
};

struct ModeRunner {
    ModeSpec spec;
    std::optional<ops::ReductionOperator> op;

    explicit ModeRunner(const ModeSpec& s) : spec(s) {
        if (spec.kind == BenchModeKind::PartialDecodeDctReduce)
            op = ops::ReductionOperator::seeded(spec.reduction, 192, 64, 7);
    }

    /// Decode one image to the mode's representation; fold it into the
    /// stand-in accumulator outside the preprocessing clock.
    void preprocess(const std::vector<std::uint8_t>& bytes, PipelineStandIn& standIn,
                    bool fold) const {
        switch (spec.kind) {
            case BenchModeKind::FullDecodeRgb: {
                const jpeg::RgbImage img = decode_to_rgb(bytes);
                if (fold) standIn.fold(img);
                break;
            }
            case BenchModeKind::PartialDecodeDct: {
                const DctTensor t = decode_to_tensor(bytes);
                if (fold) standIn.fold(t);
                break;
            }
            case BenchModeKind::PartialDecodeDctFbs: {
                DecodeOptions opts;
                opts.fbs = FbsSpec::lowest(spec.fbsN);
                const DctTensor t = decode_to_tensor(bytes, opts);
                if (fold) standIn.fold(t);
                break;
            }
            case BenchModeKind::PartialDecodeDctReduce: {
                DctTensor t = decode_to_tensor(bytes);
                // grayscale streams produce 64 channels; the 192->64 operator
                // does not apply, the tensor passes through unreduced
                if (t.channels() == op->inChannels) t = ops::forward(*op, t);
                if (fold) standIn.fold(t);
                break;
            }
        }
    }
};

}  // namespace

ModeSpec ModeSpec::parse(const std::string& name) {
    ModeSpec spec;
    if (name == "full-rgb") {
        spec.kind = BenchModeKind::FullDecodeRgb;
    } else if (name == "dct") {
        spec.kind = BenchModeKind::PartialDecodeDct;
    } else if (name.rfind("dct-fbs", 0) == 0) {
        spec.kind = BenchModeKind::PartialDecodeDctFbs;
        try {
            spec.fbsN = std::stoi(name.substr(7));
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadConfig, "bad fbs mode '" + name + "'");
        }
        if (spec.fbsN < 1 || spec.fbsN > 64)
            throw Error(ErrorCode::BadConfig, "fbs n must be in 1..64");
    } else if (name == "dct-lp" || name == "dct-la" || name == "dct-ccpp") {
        spec.kind = BenchModeKind::PartialDecodeDctReduce;
        spec.reduction = name == "dct-lp" ? ops::ReductionKind::LP
                         : name == "dct-la" ? ops::ReductionKind::LA
                                            : ops::ReductionKind::CCPP;
    } else {
        throw Error(ErrorCode::BadConfig, "unknown bench mode '" + name + "'");
    }
    return spec;
}

std::string ModeSpec::label() const {
    switch (kind) {
        case BenchModeKind::FullDecodeRgb: return "full-rgb";
        case BenchModeKind::PartialDecodeDct: return "dct";
        case BenchModeKind::PartialDecodeDctFbs: return "dct-fbs" + std::to_string(fbsN);
        case BenchModeKind::PartialDecodeDctReduce:
            return std::string("dct-") + ops::reduction_kind_name(reduction);
    }
    return "?";
}

void BenchConfig::validate() const {
    if (runs < 1 || batchesPerRun < 1 || batchSize < 1)
        throw Error(ErrorCode::BadConfig, "runs, batches and batch size must be positive");
    if (warmupBatches < 0) throw Error(ErrorCode::BadConfig, "warmup must be >= 0");
    if (modes.empty()) throw Error(ErrorCode::BadConfig, "no bench modes configured");
}

BenchConfig BenchConfig::from_text(const std::string& text) {
    BenchConfig config;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bool blank = true;
            for (char c : line) blank = blank && std::isspace(static_cast<unsigned char>(c));
            if (blank) continue;
            throw Error(ErrorCode::BadConfig, "expected key = value, got '" + line + "'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "corpus") config.corpusDir = value;
            else if (key == "runs") config.runs = std::stoi(value);
            else if (key == "batches") config.batchesPerRun = std::stoi(value);
            else if (key == "batch_size") config.batchSize = std::stoi(value);
            else if (key == "warmup") config.warmupBatches = std::stoi(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "parallel") config.parallel = value == "1" || value == "true";
            else if (key == "modes") {
                std::istringstream items(value);
                std::string item;
                while (std::getline(items, item, ',')) config.modes.push_back(ModeSpec::parse(trim(item)));
            } else {
                throw Error(ErrorCode::BadConfig, "unknown key '" + key + "'");
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadConfig, "bad value for key '" + key + "'");
        }
    }
    return config;
}

BenchConfig BenchConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::BadConfig, "cannot open bench config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

std::vector<std::size_t> batch_composition(std::size_t corpusSize, int batchesPerRun,
                                           int batchSize, std::uint64_t seed) {
    const int wanted = batchesPerRun * batchSize;
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order;
    order.reserve(static_cast<std::size_t>(wanted));
    if (corpusSize >= static_cast<std::size_t>(wanted)) {
        std::vector<std::size_t> idx(corpusSize);
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = idx.size() - 1; i > 0; --i) std::swap(idx[i], idx[rng() % (i + 1)]);
        order.assign(idx.begin(), idx.begin() + wanted);
    } else {
        // sampling with replacement, seeded
        for (int i = 0; i < wanted; ++i) order.push_back(rng() % corpusSize);
    }
    return order;
}

BenchReport run_bench(const BenchConfig& config) {
    config.validate();
    const std::vector<std::string> files = list_jpegs(config.corpusDir);
    if (files.empty()) throw Error(ErrorCode::EmptyCorpus, "no JPEG files in " + config.corpusDir);

    // images preloaded into memory; only decoding is timed
    std::vector<std::vector<std::uint8_t>> blobs;
    blobs.reserve(files.size());
    for (const auto& f : files) blobs.push_back(read_file(f));

    // deterministic batch composition, shared by every run and mode
    const std::vector<std::size_t> order =
        batch_composition(blobs.size(), config.batchesPerRun, config.batchSize, config.seed);

    // probe the luma grid once for the stand-in shape
    const jpeg::ParsedJpeg probe = jpeg::parse_headers(blobs[order[0]]);
    const int grid = std::max(probe.mcuRows * probe.vMax, probe.mcuCols * probe.hMax);

    BenchReport report;
    report.config = config;
    char host[256] = {};
    gethostname(host, sizeof(host) - 1);
    report.env.host = host;
    report.env.cores = std::thread::hardware_concurrency();
    report.env.compiler = __VERSION__;
#ifdef NDEBUG
    report.env.build = "release";
#else
    report.env.build = "debug";
#endif
    report.env.timerGranularityNs = estimate_timer_granularity_ns();

    for (const auto& modeSpec : config.modes) {
        ModeRunner runner(modeSpec);
        PipelineStandIn standIn(grid);
        ModeResult result;
        result.mode = modeSpec.label();

        auto run_batch = [&](int batch, bool timed) {
            const std::size_t base = static_cast<std::size_t>(batch) * config.batchSize;
            standIn.reset();
            double perImageSum = 0;
            const auto t0 = Clock::now();
            if (config.parallel) {
                // concurrent decodes skip the fold: the accumulator is shared
                std::vector<std::future<double>> futures;
                futures.reserve(static_cast<std::size_t>(config.batchSize));
                for (int i = 0; i < config.batchSize; ++i)
                    futures.push_back(std::async(std::launch::async, [&, i] {
                        const auto s = Clock::now();
                        runner.preprocess(blobs[order[base + static_cast<std::size_t>(i)]], standIn,
                                          false);
                        return ms_between(s, Clock::now());
                    }));
                for (auto& f : futures) perImageSum += f.get();
            } else {
                for (int i = 0; i < config.batchSize; ++i)
                    runner.preprocess(blobs[order[base + static_cast<std::size_t>(i)]], standIn,
                                      true);
            }
            const auto t1 = Clock::now();
            volatile double sink = standIn.run();
            (void)sink;
            const auto t2 = Clock::now();
            if (timed) {
                result.preRunMs.back() += ms_between(t0, t1);
                result.pipeRunMs.back() += ms_between(t1, t2);
                result.totalRunMs.back() += ms_between(t0, t2);
                if (config.parallel) result.perImagePreRunMs.back() += perImageSum;
            }
        };

        // warmup batches, excluded from the statistics
        for (int b = 0; b < std::min(config.warmupBatches, config.batchesPerRun); ++b)
            run_batch(b, false);

        for (int run = 0; run < config.runs; ++run) {
            result.preRunMs.push_back(0);
            result.pipeRunMs.push_back(0);
            result.totalRunMs.push_back(0);
            result.perImagePreRunMs.push_back(0);
            for (int b = 0; b < config.batchesPerRun; ++b) run_batch(b, true);
        }
        if (!config.parallel) result.perImagePreRunMs.clear();

        mean_std(result.preRunMs, result.preMean, result.preStd);
        mean_std(result.pipeRunMs, result.pipeMean, result.pipeStd);
        mean_std(result.totalRunMs, result.totalMean, result.totalStd);
        result.fps = static_cast<double>(config.batchesPerRun * config.batchSize) /
                     (result.totalMean / 1000.0);

        if (report.env.timerGranularityNs > 0.01 * result.preMean * 1e6)
            throw Error(ErrorCode::ClockResolutionTooCoarse,
                        "timer granularity exceeds 1% of the measured preprocessing mean");
        report.modes.push_back(std::move(result));
    }
    return report;
}

namespace {

nlohmann::json mode_to_json(const ModeResult& m) {
    nlohmann::json j{
        {"mode", m.mode},
        {"pre_ms", {{"mean", m.preMean}, {"std", m.preStd}, {"runs", m.preRunMs}}},
        {"pipeline_ms", {{"mean", m.pipeMean}, {"std", m.pipeStd}, {"runs", m.pipeRunMs}}},
        {"total_ms", {{"mean", m.totalMean}, {"std", m.totalStd}, {"runs", m.totalRunMs}}},
        {"fps", m.fps},
    };
    if (!m.perImagePreRunMs.empty()) j["per_image_pre_ms_runs"] = m.perImagePreRunMs;
    return j;
}

ModeResult mode_from_json(const nlohmann::json& j) {
    ModeResult m;
    m.mode = j.at("mode").get<std::string>();
    m.preMean = j.at("pre_ms").at("mean").get<double>();
    m.preStd = j.at("pre_ms").at("std").get<double>();
    m.preRunMs = j.at("pre_ms").at("runs").get<std::vector<double>>();
    m.pipeMean = j.at("pipeline_ms").at("mean").get<double>();
    m.pipeStd = j.at("pipeline_ms").at("std").get<double>();
    m.pipeRunMs = j.at("pipeline_ms").at("runs").get<std::vector<double>>();
    m.totalMean = j.at("total_ms").at("mean").get<double>();
    m.totalStd = j.at("total_ms").at("std").get<double>();
    m.totalRunMs = j.at("total_ms").at("runs").get<std::vector<double>>();
    m.fps = j.at("fps").get<double>();
    if (j.contains("per_image_pre_ms_runs"))
        m.perImagePreRunMs = j.at("per_image_pre_ms_runs").get<std::vector<double>>();
    return m;
}

std::string pm(double mean, double sd) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%8.2f +- %6.2f", mean, sd);
    return buf;
}

}  // namespace

BenchFormat parse_bench_format(const std::string& name) {
    if (name == "csv") return BenchFormat::Csv;
    if (name == "json") return BenchFormat::Json;
    if (name == "text") return BenchFormat::Text;
    throw Error(ErrorCode::BadConfig, "unknown format '" + name + "' (csv|json|text)");
}

std::string emit_report(const BenchReport& report, BenchFormat format) {
    std::ostringstream out;
    switch (format) {
        case BenchFormat::Json: {
            nlohmann::json j;
            std::vector<std::string> modeNames;
            for (const auto& m : report.config.modes) modeNames.push_back(m.label());
            j["config"] = {{"corpus", report.config.corpusDir},
                           {"runs", report.config.runs},
                           {"batches_per_run", report.config.batchesPerRun},
                           {"batch_size", report.config.batchSize},
                           {"warmup_batches", report.config.warmupBatches},
                           {"seed", report.config.seed},
                           {"parallel", report.config.parallel},
                           {"modes", modeNames}};
            j["environment"] = {{"host", report.env.host},
                                {"cores", report.env.cores},
                                {"compiler", report.env.compiler},
                                {"build", report.env.build},
                                {"timer_granularity_ns", report.env.timerGranularityNs}};
            j["modes"] = nlohmann::json::array();
            for (const auto& m : report.modes) j["modes"].push_back(mode_to_json(m));
            out << j.dump(2) << "\n";
            break;
        }
        case BenchFormat::Csv: {
            out << "mode,pre_mean_ms,pre_std_ms,pipeline_mean_ms,pipeline_std_ms,"
                   "total_mean_ms,total_std_ms,fps\n";
            char buf[256];
            for (const auto& m : report.modes) {
                std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.2f\n",
                              m.mode.c_str(), m.preMean, m.preStd, m.pipeMean, m.pipeStd,
                              m.totalMean, m.totalStd, m.fps);
                out << buf;
            }
            break;
        }
        case BenchFormat::Text: {
            out << "per-run times, " << report.config.runs << " runs x "
                << report.config.batchesPerRun << " batches x " << report.config.batchSize
                << " images (warmup " << report.config.warmupBatches << ")\n";
            char header[160];
            std::snprintf(header, sizeof(header), "%-12s %19s %19s %19s %8s\n", "mode",
                          "preprocessing(ms)", "pipeline(ms)", "total(ms)", "fps");
            out << header;
            for (const auto& m : report.modes) {
                char buf[200];
                std::snprintf(buf, sizeof(buf), "%-12s %s %s %s %8.1f\n", m.mode.c_str(),
                              pm(m.preMean, m.preStd).c_str(), pm(m.pipeMean, m.pipeStd).c_str(),
                              pm(m.totalMean, m.totalStd).c_str(), m.fps);
                out << buf;
            }
            out << "host " << report.env.host << ", " << report.env.cores << " cores, "
                << report.env.build << " build, timer granularity "
                << report.env.timerGranularityNs << " ns\n";
            break;
        }
    }
    return out.str();
}

BenchReport parse_report_json(const std::string& json) {
    const nlohmann::json j = nlohmann::json::parse(json);
    BenchReport report;
    const auto& c = j.at("config");
    report.config.corpusDir = c.at("corpus").get<std::string>();
    report.config.runs = c.at("runs").get<int>();
    report.config.batchesPerRun = c.at("batches_per_run").get<int>();
    report.config.batchSize = c.at("batch_size").get<int>();
    report.config.warmupBatches = c.at("warmup_batches").get<int>();
    report.config.seed = c.at("seed").get<std::uint64_t>();
    report.config.parallel = c.at("parallel").get<bool>();
    for (const auto& name : c.at("modes")) report.config.modes.push_back(ModeSpec::parse(name));
    const auto& e = j.at("environment");
    report.env.host = e.at("host").get<std::string>();
    report.env.cores = e.at("cores").get<unsigned>();
    report.env.compiler = e.at("compiler").get<std::string>();
    report.env.build = e.at("build").get<std::string>();
    report.env.timerGranularityNs = e.at("timer_granularity_ns").get<double>();
    for (const auto& m : j.at("modes")) report.modes.push_back(mode_from_json(m));
    return report;
}

PrepareResult prepare_corpus(const std::string& inputDir, const std::string& outputDir,
                             int cropSize, int quality) {
    const std::vector<std::string> files = list_jpegs(inputDir);
    if (files.empty()) throw Error(ErrorCode::EmptyCorpus, "no JPEG files in " + inputDir);
    std::error_code ec;
    fs::create_directories(outputDir, ec);
    if (ec) throw Error(ErrorCode::UnwritableOutput, "cannot create " + outputDir);

    const fs::path manifestPath = fs::path(outputDir) / "manifest.jsonl";
    std::ofstream manifest(manifestPath);
    if (!manifest) throw Error(ErrorCode::UnwritableOutput, "cannot write " + manifestPath.string());

    PrepareResult result;
    result.manifestPath = manifestPath.string();
    for (const auto& file : files) {
        const std::string name = fs::path(file).filename().string();
        jpeg::RgbImage img;
        try {
            const auto bytes = read_file(file);
            img = decode_to_rgb(bytes);
        } catch (const Error& err) {
            manifest << "{\"file\":\"" << name << "\",\"skipped\":\"" << err.what() << "\"}\n";
            ++result.skipped;
            continue;
        }
        if (img.width < cropSize || img.height < cropSize) {
            manifest << "{\"file\":\"" << name << "\",\"skipped\":\"smaller than crop\"}\n";
            ++result.skipped;
            continue;
        }
        // center crop rounded down to a multiple of 16 so the pixel-domain
        // crop stays aligned with the 4:2:0 MCU grid
        const int ox = ((img.width - cropSize) / 2) & ~15;
        const int oy = ((img.height - cropSize) / 2) & ~15;
        std::vector<std::uint8_t> cropped(static_cast<std::size_t>(cropSize) * cropSize * 3);
        for (int y = 0; y < cropSize; ++y)
            for (int x = 0; x < cropSize; ++x)
                for (int ch = 0; ch < 3; ++ch)
                    cropped[(static_cast<std::size_t>(y) * cropSize + x) * 3 + ch] =
                        img.at(ox + x, oy + y, ch);
        const auto encoded =
            encode_jpeg_rgb(cropped.data(), cropSize, cropSize, quality, Subsampling::S420);
        const fs::path outPath = fs::path(outputDir) / name;
        std::ofstream out(outPath, std::ios::binary);
        out.write(reinterpret_cast<const char*>(encoded.data()),
                  static_cast<std::streamsize>(encoded.size()));
        if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write " + outPath.string());
        manifest << "{\"file\":\"" << name << "\",\"bytes\":" << encoded.size()
                 << ",\"width\":" << cropSize << ",\"height\":" << cropSize
                 << ",\"quality\":" << quality << ",\"orig_width\":" << img.width
                 << ",\"orig_height\":" << img.height << ",\"offset\":[" << ox << "," << oy
                 << "]}\n";
        ++result.prepared;
    }
    return result;
}

}  // namespace dctpipe::bench
