#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dctpipe/bench/harness.hpp"
#include "dctpipe/bench/synth.hpp"
#include "dctpipe/cost/report.hpp"
#include "dctpipe/cost/variants.hpp"
#include "dctpipe/dctt_io.hpp"
#include "dctpipe/error.hpp"
#include "dctpipe/pipeline.hpp"
#include "dctpipe/reduction.hpp"
#include "dctpipe/standardize.hpp"

namespace {

using namespace dctpipe;

std::vector<std::uint8_t> read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::TruncatedFile, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot open " + path + " for writing");
    out << text;
}

FbsSpec make_fbs(const std::string& strategy, int n, const std::string& listValue) {
    if (strategy == "lowest") return FbsSpec::lowest(n);
    if (strategy == "median") return FbsSpec::median();
    if (strategy == "highest") return FbsSpec::highest();
    if (strategy == "extremes") return FbsSpec::extremes();
    if (strategy == "list") {
        std::vector<int> indices;
        std::istringstream in(listValue);
        std::string item;
        while (std::getline(in, item, ',')) indices.push_back(std::stoi(item));
        return FbsSpec::explicit_list(indices);
    }
    throw Error(ErrorCode::BadConfig, "unknown strategy '" + strategy + "'");
}

ops::ReductionKind parse_op(const std::string& name) {
    if (name == "lp") return ops::ReductionKind::LP;
    if (name == "la") return ops::ReductionKind::LA;
    if (name == "ccpp") return ops::ReductionKind::CCPP;
    throw Error(ErrorCode::BadConfig, "unknown operator '" + name + "' (lp|la|ccpp)");
}

std::string format_indices(const std::vector<int>& indices) {
    std::ostringstream out;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i) out << ',';
        out << indices[i];
    }
    return out.str();
}

int run(int argc, char** argv) {
    CLI::App app{"compressed-domain JPEG preprocessing toolkit"};
    app.require_subcommand(1);

    // decode
    auto* decode = app.add_subcommand("decode", "partially decode a baseline JPEG to a DCTT tensor");
    std::string decodeInput, decodeOut, decodeStats;
    bool keepQuantized = false, lumaOnly = false;
    decode->add_option("input", decodeInput, "baseline JPEG file")->required();
    decode->add_option("--out", decodeOut, "output .dctt path")->required();
    decode->add_flag("--keep-quantized", keepQuantized, "keep quantized integers (int16 payload)");
    decode->add_flag("--luma-only", lumaOnly, "emit the 64-channel Y tensor only");
    decode->add_option("--standardize", decodeStats,
                       "apply per-channel affine standardization from a stats file");

    // select
    auto* select = app.add_subcommand("select", "frequency band selection on a DCTT tensor");
    std::string selInput, selOut, selStrategy = "lowest", selList;
    int selN = 64;
    select->add_option("input", selInput, "input .dctt")->required();
    select->add_option("--strategy", selStrategy, "lowest|median|highest|extremes|list");
    select->add_option("--n", selN, "retained coefficients per component (lowest)");
    select->add_option("--list", selList, "comma-separated zigzag indices (strategy=list)");
    select->add_option("--out", selOut, "output .dctt path")->required();

    // reduce
    auto* reduce = app.add_subcommand("reduce", "apply a channel-reduction operator");
    std::string redInput, redOut, redOp = "ccpp", redWeights, redSaveWeights;
    int redChannels = 64;
    std::uint64_t redSeed = 0;
    bool redHasSeed = false;
    reduce->add_option("input", redInput, "input .dctt")->required();
    reduce->add_option("--op", redOp, "lp|la|ccpp");
    reduce->add_option("--weights", redWeights, "operator weight file (.dctt container)");
    reduce->add_option("--seed", redSeed, "seeded deterministic weights")
        ->each([&](const std::string&) { redHasSeed = true; });
    reduce->add_option("--channels", redChannels, "output channels (default 64)");
    reduce->add_option("--save-weights", redSaveWeights, "dump the operator weights");
    reduce->add_option("--out", redOut, "output .dctt path")->required();

    // gradcheck
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of operator gradients");
    std::string gcOp = "ccpp";
    int gcTrials = 10, gcIn = 24, gcOut = 8;
    std::uint64_t gcSeed = 1234;
    gradcheck->add_option("--op", gcOp, "lp|la|ccpp");
    gradcheck->add_option("--trials", gcTrials, "number of random trials");
    gradcheck->add_option("--in", gcIn, "input channels of the checked operator");
    gradcheck->add_option("--channels", gcOut, "output channels of the checked operator");
    gradcheck->add_option("--seed", gcSeed, "rng seed");

    // cost
    auto* cost = app.add_subcommand("cost", "symbolic FLOP/parameter ledger for the model family");
    std::string costVariant, costFormat = "text", costBaseline, costCatalog, costOut;
    bool costAll = false, costPerLayer = false, costDump = false;
    cost->add_option("--variant", costVariant, "variant name (see --all for the list)");
    cost->add_flag("--all", costAll, "every canonical variant");
    cost->add_option("--format", costFormat, "csv|json|text");
    cost->add_option("--baseline", costBaseline, "emit ratios against this variant");
    cost->add_option("--catalog", costCatalog, "calibrated-width catalog file (default: built-in)");
    cost->add_flag("--per-layer", costPerLayer, "include per-layer rows");
    cost->add_flag("--dump-catalog", costDump, "print the active catalog text and exit");
    cost->add_option("--out", costOut, "write output to file instead of stdout");

    // bench
    auto* bench = app.add_subcommand("bench", "preprocessing timing harness");
    std::string benchConfig, benchCorpus, benchOut, benchFormat = "text";
    std::vector<std::string> benchModes;
    int benchRuns = -1, benchBatches = -1, benchBatchSize = -1, benchWarmup = -1;
    std::uint64_t benchSeed = 0;
    bool benchHasSeed = false, benchParallel = false;
    bench->add_option("--config", benchConfig, "key=value config file");
    bench->add_option("--corpus", benchCorpus, "prepared corpus directory");
    bench->add_option("--mode", benchModes, "bench mode (repeatable): full-rgb|dct|dct-fbsN|dct-lp|dct-la|dct-ccpp");
    bench->add_option("--runs", benchRuns, "runs (default 10)");
    bench->add_option("--batches", benchBatches, "batches per run (default 25)");
    bench->add_option("--batch-size", benchBatchSize, "images per batch (default 8)");
    bench->add_option("--warmup", benchWarmup, "warmup batches (default 3)");
    bench->add_option("--seed", benchSeed, "batch composition seed")
        ->each([&](const std::string&) { benchHasSeed = true; });
    bench->add_flag("--parallel", benchParallel, "decode batch members concurrently");
    bench->add_option("--out", benchOut, "write the JSON report here");
    bench->add_option("--format", benchFormat, "stdout format: csv|json|text");

    // make-corpus
    auto* makeCorpus = app.add_subcommand("make-corpus", "generate the synthetic self-contained corpus");
    std::string mcOut;
    int mcCount = 64, mcSize = 224;
    std::uint64_t mcSeed = 7;
    makeCorpus->add_option("--out", mcOut, "output directory")->required();
    makeCorpus->add_option("--count", mcCount, "image count (default 64)");
    makeCorpus->add_option("--size", mcSize, "square image size (default 224)");
    makeCorpus->add_option("--seed", mcSeed, "content seed");

    // stats
    auto* stats = app.add_subcommand("stats", "per-channel mean/std from a corpus pass");
    std::string statsCorpus, statsOut;
    bool statsLumaOnly = false;
    stats->add_option("--corpus", statsCorpus, "directory of baseline JPEGs")->required();
    stats->add_option("--out", statsOut, "output stats .dctt")->required();
    stats->add_flag("--luma-only", statsLumaOnly, "accumulate Y-only tensors");

    // prepare-corpus
    auto* prep = app.add_subcommand("prepare-corpus", "center-crop and re-encode a corpus");
    std::string prepIn, prepOut;
    int prepCrop = 224, prepQuality = 90;
    prep->add_option("--in", prepIn, "input directory of JPEGs")->required();
    prep->add_option("--out", prepOut, "output directory")->required();
    prep->add_option("--crop", prepCrop, "crop size (default 224)");
    prep->add_option("--quality", prepQuality, "re-encode quality (default 90)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (decode->parsed()) {
        DecodeOptions opts;
        opts.keepQuantized = keepQuantized;
        opts.lumaOnly = lumaOnly;
        DctTensor t = decode_to_tensor(read_binary(decodeInput), opts);
        if (!decodeStats.empty()) {
            if (keepQuantized)
                throw Error(ErrorCode::BadConfig, "--standardize requires dequantized output");
            t = standardize(t, ChannelStats::from_tensor(read_tensor_file(decodeStats)));
        }
        write_tensor_file(t, decodeOut, keepQuantized ? DcttDtype::Int16 : DcttDtype::Float32);
        std::cout << "wrote " << decodeOut << ": " << t.channels() << "x" << t.rows << "x" << t.cols
                  << (keepQuantized ? " (quantized int16)" : " (dequantized float32)") << "\n";
    } else if (select->parsed()) {
        const DctTensor t = read_tensor_file(selInput);
        const FbsSpec spec = make_fbs(selStrategy, selN, selList);
        const DctTensor out = dctpipe::select(t, spec);
        write_tensor_file(out, selOut);
        std::cout << "retained zigzag indices: " << format_indices(spec.indices()) << "\n"
                  << "wrote " << selOut << ": " << out.channels() << "x" << out.rows << "x"
                  << out.cols << "\n";
    } else if (reduce->parsed()) {
        const DctTensor t = read_tensor_file(redInput);
        ops::ReductionOperator op;
        if (!redWeights.empty()) {
            op = ops::load_operator(redWeights);
        } else {
            op = ops::ReductionOperator::seeded(parse_op(redOp), t.channels(), redChannels,
                                                redHasSeed ? redSeed : 1);
        }
        const DctTensor out = ops::forward(op, t);
        write_tensor_file(out, redOut);
        if (!redSaveWeights.empty()) ops::save_operator(op, redSaveWeights);
        std::cout << "wrote " << redOut << ": " << out.channels() << "x" << out.rows << "x"
                  << out.cols << " (" << ops::reduction_kind_name(op.kind) << " "
                  << op.inChannels << "->" << op.outChannels << ")\n";
    } else if (gradcheck->parsed()) {
        const auto report = ops::grad_check(parse_op(gcOp), gcIn, gcOut, gcTrials, gcSeed);
        std::printf("%s max_rel_err=%.3e (threshold 1e-4, %d trials, step %.0e)\n",
                    report.pass ? "PASS" : "FAIL", report.maxRelError, report.trials, report.step);
        if (!report.pass) return 1;
    } else if (cost->parsed()) {
        const cost::VariantCatalog catalog = costCatalog.empty()
                                                 ? cost::VariantCatalog::builtin()
                                                 : cost::VariantCatalog::from_file(costCatalog);
        if (costDump) {
            write_text(costOut, cost::builtin_catalog_text());
            return 0;
        }
        std::vector<std::string> names;
        if (costAll) names = cost::canonical_variants();
        else if (!costVariant.empty()) names.push_back(costVariant);
        else throw Error(ErrorCode::UnknownVariant, "pass --variant NAME or --all");

        std::vector<cost::CostReport> reports;
        for (const auto& name : names)
            reports.push_back(cost::count(cost::build_variant(name, catalog)));
        const auto format = cost::parse_report_format(costFormat);
        std::string text = cost::format_reports(reports, format, costPerLayer);
        if (!costBaseline.empty())
            text += cost::format_comparison(cost::compare(reports, costBaseline), format);
        write_text(costOut, text);
    } else if (bench->parsed()) {
        bench::BenchConfig config;
        if (!benchConfig.empty()) config = bench::BenchConfig::from_file(benchConfig);
        if (!benchCorpus.empty()) config.corpusDir = benchCorpus;
        if (config.corpusDir.empty())
            if (const char* env = std::getenv("DCTPIPE_CORPUS")) config.corpusDir = env;
        if (config.corpusDir.empty())
            throw Error(ErrorCode::EmptyCorpus, "corpus not prepared: pass --corpus, a config, or set DCTPIPE_CORPUS");
        for (const auto& m : benchModes) config.modes.push_back(bench::ModeSpec::parse(m));
        if (config.modes.empty())
            config.modes = {bench::ModeSpec::parse("full-rgb"), bench::ModeSpec::parse("dct")};
        if (benchRuns > 0) config.runs = benchRuns;
        if (benchBatches > 0) config.batchesPerRun = benchBatches;
        if (benchBatchSize > 0) config.batchSize = benchBatchSize;
        if (benchWarmup >= 0) config.warmupBatches = benchWarmup;
        if (benchHasSeed) config.seed = benchSeed;
        if (benchParallel) config.parallel = true;

        const bench::BenchReport report = bench::run_bench(config);
        std::cout << bench::emit_report(report, bench::parse_bench_format(benchFormat));
        if (!benchOut.empty())
            write_text(benchOut, bench::emit_report(report, bench::BenchFormat::Json));
    } else if (makeCorpus->parsed()) {
        const auto paths = bench::generate_corpus(mcOut, mcCount, mcSeed, mcSize);
        std::cout << "wrote " << paths.size() << " synthetic JPEGs to " << mcOut << "\n";
    } else if (stats->parsed()) {
        namespace fs = std::filesystem;
        ChannelStatsAccumulator acc;
        int used = 0;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(statsCorpus))
            if (entry.path().extension() == ".jpg" || entry.path().extension() == ".jpeg")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            DecodeOptions opts;
            opts.lumaOnly = statsLumaOnly;
            try {
                const DctTensor t = decode_to_tensor(read_binary(file.string()), opts);
                acc.add(t);
                ++used;
            } catch (const Error&) {
                // grayscale/odd streams whose channel set disagrees are skipped
            }
        }
        if (used == 0) throw Error(ErrorCode::EmptyCorpus, "no usable images in " + statsCorpus);
        write_tensor_file(acc.finalize().to_tensor(), statsOut);
        std::cout << "wrote " << statsOut << " from " << used << " images\n";
    } else if (prep->parsed()) {
        const auto result = bench::prepare_corpus(prepIn, prepOut, prepCrop, prepQuality);
        std::cout << "prepared " << result.prepared << " images (" << result.skipped
                  << " skipped), manifest " << result.manifestPath << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
