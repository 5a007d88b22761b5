#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dctpipe/dct_tensor.hpp"
#include "dctpipe/reduction.hpp"

namespace dctpipe::bench {

enum class BenchModeKind { FullDecodeRgb, PartialDecodeDct, PartialDecodeDctFbs, PartialDecodeDctReduce };

struct ModeSpec {
    BenchModeKind kind = BenchModeKind::PartialDecodeDct;
    int fbsN = 64;                                          // for the Fbs mode
    ops::ReductionKind reduction = ops::ReductionKind::CCPP;  // for the Reduce mode

    /// "full-rgb", "dct", "dct-fbs<N>", "dct-lp" / "dct-la" / "dct-ccpp"
    static ModeSpec parse(const std::string& name);
    std::string label() const;
};

struct BenchConfig {
    std::string corpusDir;
    int runs = 10;
    int batchesPerRun = 25;
    int batchSize = 8;
    int warmupBatches = 3;
    std::uint64_t seed = 42;
    bool parallel = false;
    std::vector<ModeSpec> modes;

    /// key=value text: corpus, runs, batches, batch_size, warmup, seed,
    /// parallel, modes (comma separated)
    static BenchConfig from_file(const std::string& path);
    static BenchConfig from_text(const std::string& text);
    void validate() const;
};

struct ModeResult {
    std::string mode;
    // per-run aggregates (sum over the run's batches), milliseconds
    std::vector<double> preRunMs;
    std::vector<double> pipeRunMs;
    std::vector<double> totalRunMs;
    std::vector<double> perImagePreRunMs;  // parallel mode only: sum of per-image times
    double preMean = 0, preStd = 0;
    double pipeMean = 0, pipeStd = 0;
    double totalMean = 0, totalStd = 0;
    double fps = 0;
};

struct EnvironmentRecord {
    std::string host;
    unsigned cores = 0;
    std::string compiler;
    std::string build;
    double timerGranularityNs = 0;
};

struct BenchReport {
    BenchConfig config;
    EnvironmentRecord env;
    std::vector<ModeResult> modes;
};

enum class BenchFormat { Csv, Json, Text };

BenchFormat parse_bench_format(const std::string& name);

/// Deterministic batch membership shared by every run and mode: a seeded
/// shuffle when the corpus is large enough, seeded sampling with replacement
/// otherwise. Returns batchesPerRun * batchSize corpus indices.
std::vector<std::size_t> batch_composition(std::size_t corpusSize, int batchesPerRun,
                                           int batchSize, std::uint64_t seed);

BenchReport run_bench(const BenchConfig& config);

std::string emit_report(const BenchReport& report, BenchFormat format);
BenchReport parse_report_json(const std::string& json);

struct PrepareResult {
    int prepared = 0;
    int skipped = 0;
    std::string manifestPath;
};

/// Center-crops every decodable baseline JPEG in inputDir to cropSize x
/// cropSize at 16-aligned offsets and re-encodes at `quality`; writes a
/// manifest.jsonl alongside. Undersized or undecodable inputs are skipped
/// with a manifest note.
PrepareResult prepare_corpus(const std::string& inputDir, const std::string& outputDir,
                             int cropSize = 224, int quality = 90);

}  // namespace dctpipe::bench
