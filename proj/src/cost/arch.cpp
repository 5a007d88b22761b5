#include "dctpipe/cost/arch.hpp"

#include "dctpipe/error.hpp"

namespace dctpipe::cost {

namespace {

/// Elaboration cursor: the running activation shape plus the ledger.
struct Builder {
    CostReport report;
    int channels = 0;
    int height = 0;
    int width = 0;

    std::int64_t positions() const { return static_cast<std::int64_t>(height) * width; }

    void push(LayerRow row) {
        row.outChannels = channels;
        row.outHeight = height;
        row.outWidth = width;
        report.rows.push_back(std::move(row));
    }

    void conv(const std::string& name, int kernel, int outCh, int stride, int pad,
              bool bias = false) {
        const int outH = (height + 2 * pad - kernel) / stride + 1;
        const int outW = (width + 2 * pad - kernel) / stride + 1;
        if (outH < 1 || outW < 1)
            throw Error(ErrorCode::UnelaboratedSpec, name + ": kernel does not fit input");
        LayerRow row;
        row.name = name;
        row.kind = LayerKind::Conv;
        const std::int64_t kk = static_cast<std::int64_t>(kernel) * kernel;
        row.params = kk * channels * outCh + (bias ? outCh : 0);
        row.macs = kk * channels * outCh * outH * outW;
        row.extraFlops = bias ? static_cast<std::int64_t>(outCh) * outH * outW : 0;
        channels = outCh;
        height = outH;
        width = outW;
        push(std::move(row));
    }

    void batch_norm(const std::string& name) {
        LayerRow row;
        row.name = name;
        row.kind = LayerKind::BatchNorm;
        row.params = 2 * static_cast<std::int64_t>(channels);
        row.extraFlops = 2 * static_cast<std::int64_t>(channels) * positions();
        push(std::move(row));
    }

    void relu(const std::string& name) {
        LayerRow row;
        row.name = name;
        row.kind = LayerKind::ReLU;
        row.extraFlops = static_cast<std::int64_t>(channels) * positions();
        push(std::move(row));
    }

    void max_pool(const std::string& name, int kernel, int stride, int pad) {
        const int outH = (height + 2 * pad - kernel) / stride + 1;
        const int outW = (width + 2 * pad - kernel) / stride + 1;
        LayerRow row;
        row.name = name;
        row.kind = LayerKind::MaxPool;
        row.extraFlops = static_cast<std::int64_t>(kernel * kernel - 1) * channels * outH * outW;
        height = outH;
        width = outW;
        push(std::move(row));
    }

    void add(const std::string& name) {
        LayerRow row;
        row.name = name;
        row.kind = LayerKind::Add;
        row.extraFlops = static_cast<std::int64_t>(channels) * positions();
        push(std::move(row));
    }

    void global_avg_pool(const std::string& name) {
        LayerRow row;
        row.name = name;
        row.kind = LayerKind::GlobalAvgPool;
        row.extraFlops = static_cast<std::int64_t>(channels) * positions();
        height = 1;
        width = 1;
        push(std::move(row));
    }

    void fully_connected(const std::string& name, int outFeatures) {
        LayerRow row;
        row.name = name;
        row.kind = LayerKind::FullyConnected;
        row.params = static_cast<std::int64_t>(channels) * outFeatures + outFeatures;
        row.macs = static_cast<std::int64_t>(channels) * outFeatures;
        row.extraFlops = outFeatures;  // bias adds
        channels = outFeatures;
        push(std::move(row));
    }

    /// Bottleneck residual block: 1x1 (stride here) -> 3x3 -> 1x1, BN+ReLU
    /// between, projection shortcut when the shape changes, add + ReLU.
    void bottleneck(const std::string& name, int width_, int outCh, int stride) {
        const int inCh = channels;
        const int inH = height;
        const int inW = width;
        const bool project = stride != 1 || inCh != outCh;

        conv(name + ".conv1", 1, width_, stride, 0);
        batch_norm(name + ".bn1");
        relu(name + ".relu1");
        conv(name + ".conv2", 3, width_, 1, 1);
        batch_norm(name + ".bn2");
        relu(name + ".relu2");
        conv(name + ".conv3", 1, outCh, 1, 0);
        batch_norm(name + ".bn3");

        if (project) {
            // shortcut cost measured from the block input shape
            const int mainCh = channels, mainH = height, mainW = width;
            channels = inCh;
            height = inH;
            width = inW;
            conv(name + ".proj", 1, outCh, stride, 0);
            batch_norm(name + ".proj_bn");
            if (channels != mainCh || height != mainH || width != mainW)
                throw Error(ErrorCode::UnelaboratedSpec, name + ": shortcut shape mismatch");
        }
        add(name + ".add");
        relu(name + ".relu3");
    }

    void stage(const StageSpec& spec) {
        for (int b = 0; b < spec.blocks; ++b)
            bottleneck(spec.name + ".block" + std::to_string(b + 1), spec.width, spec.outChannels,
                       b == 0 ? spec.stride : 1);
    }
};

}  // namespace

const char* layer_kind_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv: return "conv";
        case LayerKind::BatchNorm: return "batch_norm";
        case LayerKind::ReLU: return "relu";
        case LayerKind::MaxPool: return "max_pool";
        case LayerKind::GlobalAvgPool: return "global_avg_pool";
        case LayerKind::FullyConnected: return "fully_connected";
        case LayerKind::Add: return "add";
        case LayerKind::LPOp: return "lp";
        case LayerKind::LAOp: return "la";
        case LayerKind::CCPPOp: return "ccpp";
        case LayerKind::Concat: return "concat";
        case LayerKind::Upsample: return "upsample";
    }
    return "?";
}

std::string ArchSpec::input_descriptor() const {
    return (rgbStem ? "rgb " : "dct ") + std::to_string(inChannels) + "x" +
           std::to_string(inHeight) + "x" + std::to_string(inWidth);
}

CostReport count(const ArchSpec& spec) {
    if (spec.inChannels < 1 || spec.inHeight < 1 || spec.inWidth < 1 || spec.stages.empty())
        throw Error(ErrorCode::UnelaboratedSpec, "arch spec is missing input shape or stages");

    Builder b;
    b.report.variant = spec.name;
    b.report.inputDescriptor = spec.input_descriptor();
    b.channels = spec.inChannels;
    b.height = spec.inHeight;
    b.width = spec.inWidth;

    if (spec.rgbStem) {
        b.conv("stem.conv", 7, 64, 2, 3);
        b.batch_norm("stem.bn");
        b.relu("stem.relu");
        b.max_pool("stem.maxpool", 3, 2, 1);
    }
    if (spec.entryBatchNorm) b.batch_norm("entry.bn");
    if (spec.entryReduction) {
        const auto [kind, outCh] = *spec.entryReduction;
        LayerRow row;
        row.name = std::string("entry.") + ops::reduction_kind_name(kind);
        switch (kind) {
            case ops::ReductionKind::LP:
                row.kind = LayerKind::LPOp;
                row.params = static_cast<std::int64_t>(b.channels) * outCh;
                row.macs = static_cast<std::int64_t>(b.channels) * outCh * b.positions();
                break;
            case ops::ReductionKind::CCPP:
                row.kind = LayerKind::CCPPOp;
                row.params = static_cast<std::int64_t>(b.channels) * outCh + outCh;
                row.macs = static_cast<std::int64_t>(b.channels) * outCh * b.positions();
                // bias adds + rectification
                row.extraFlops = (static_cast<std::int64_t>(outCh) + outCh) * b.positions();
                break;
            case ops::ReductionKind::LA:
                // n score multiplies + softmax (exp, sum, div per channel) +
                // n weighted-sum multiplies, itemized outside the headline
                row.kind = LayerKind::LAOp;
                row.params = static_cast<std::int64_t>(outCh) * (b.channels / outCh);
                row.extraFlops = 5ll * b.channels * b.positions();
                break;
        }
        b.channels = outCh;
        b.push(std::move(row));
    }

    for (const auto& stage : spec.stages) b.stage(stage);

    b.global_avg_pool("head.avgpool");
    b.fully_connected("head.fc", spec.fcClasses);

    for (const auto& row : b.report.rows) {
        b.report.totalParams += row.params;
        b.report.totalMacs += row.macs;
        b.report.totalExtraFlops += row.extraFlops;
    }
    b.report.convention =
        "1 MAC = 1 FLOP; headline counts conv and fully-connected MACs only; "
        "batch norm, activations, pooling, elementwise adds, biases and the LA "
        "entry are itemized under extra_flops; params = weights + biases + "
        "batch-norm affine pairs";

    // informational: 8x8 block count of the input image (luma + chroma at
    // 4:2:0) and the inverse-transform cost tied to it
    const std::int64_t lumaBlocks =
        spec.rgbStem
            ? (static_cast<std::int64_t>((spec.inHeight + 7) / 8) * ((spec.inWidth + 7) / 8))
            : static_cast<std::int64_t>(spec.inHeight) * spec.inWidth;
    const std::int64_t chromaBlocks = 2 * ((lumaBlocks + 3) / 4);
    b.report.inputBlocks = lumaBlocks + chromaBlocks;
    b.report.idctFlops = dct_flops_per_block * b.report.inputBlocks;
    return b.report;
}

std::vector<ComparisonRow> compare(const std::vector<CostReport>& reports,
                                   const std::string& baseline) {
    const CostReport* base = nullptr;
    for (const auto& r : reports)
        if (r.variant == baseline) base = &r;
    if (!base)
        throw Error(ErrorCode::MissingBaseline, "baseline '" + baseline + "' not among reports");

    std::vector<ComparisonRow> out;
    out.reserve(reports.size());
    for (const auto& r : reports) {
        ComparisonRow row;
        row.variant = r.variant;
        row.gflops = r.gflops();
        row.mparams = r.mparams();
        row.flopsRatio = static_cast<double>(r.totalMacs) / static_cast<double>(base->totalMacs);
        row.paramsRatio = static_cast<double>(r.totalParams) / static_cast<double>(base->totalParams);
        out.push_back(row);
    }
    return out;
}

}  // namespace dctpipe::cost
