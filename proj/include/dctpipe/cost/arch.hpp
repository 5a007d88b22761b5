#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dctpipe/reduction.hpp"

namespace dctpipe::cost {

enum class LayerKind {
    Conv,
    BatchNorm,
    ReLU,
    MaxPool,
    GlobalAvgPool,
    FullyConnected,
    Add,
    LPOp,
    LAOp,
    CCPPOp,
    Concat,
    Upsample,
};

const char* layer_kind_name(LayerKind kind);

/// One ledger row. `macs` is the headline count (conv + fully-connected
/// multiply-accumulates); everything else lands in `extraFlops`, itemized but
/// outside the headline number.
struct LayerRow {
    std::string name;
    LayerKind kind = LayerKind::Conv;
    std::int64_t params = 0;
    std::int64_t macs = 0;
    std::int64_t extraFlops = 0;
    int outChannels = 0;
    int outHeight = 0;
    int outWidth = 0;
};

struct CostReport {
    std::string variant;
    std::string inputDescriptor;
    std::vector<LayerRow> rows;
    std::int64_t totalParams = 0;
    std::int64_t totalMacs = 0;
    std::int64_t totalExtraFlops = 0;
    std::string convention;
    // informational: 8x8 blocks in the input image and the per-block inverse
    // transform cost the partial decode avoids (or the RGB path incurs)
    std::int64_t inputBlocks = 0;
    std::int64_t idctFlops = 0;

    double gflops() const { return static_cast<double>(totalMacs) / 1e9; }
    double mparams() const { return static_cast<double>(totalParams) / 1e6; }
};

/// Residual stage: `blocks` bottlenecks of the given internal width expanding
/// to `outChannels`; `stride` applies to the first block (on its first 1x1
/// conv, with a strided 1x1 projection shortcut).
struct StageSpec {
    std::string name;
    int blocks = 0;
    int width = 0;
    int outChannels = 0;
    int stride = 1;
};

/// Symbolic network description. Entry is either the RGB stem or the DCT
/// entry (batch norm plus an optional channel-reduction operator).
struct ArchSpec {
    std::string name;
    int inChannels = 0;
    int inHeight = 0;
    int inWidth = 0;
    bool rgbStem = false;
    bool entryBatchNorm = false;
    std::optional<std::pair<ops::ReductionKind, int>> entryReduction;
    std::vector<StageSpec> stages;
    int fcClasses = 1000;

    std::string input_descriptor() const;
};

/// Elaborates the spec layer by layer, propagating resolutions, and returns
/// the FLOP/parameter ledger.
CostReport count(const ArchSpec& spec);

/// Proportional view against a baseline report (ratios of headline GFLOPs and
/// parameters). Throws MissingBaseline if the name is absent.
struct ComparisonRow {
    std::string variant;
    double gflops = 0.0;
    double mparams = 0.0;
    double flopsRatio = 1.0;
    double paramsRatio = 1.0;
};

std::vector<ComparisonRow> compare(const std::vector<CostReport>& reports,
                                   const std::string& baseline);

inline constexpr std::int64_t dct_flops_per_block = 1920;

}  // namespace dctpipe::cost
