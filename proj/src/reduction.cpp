#include "dctpipe/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "dctpipe/dctt_io.hpp"

namespace dctpipe::ops {

namespace {

using MatrixD = ReductionOperatorT<double>::Matrix;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double loss(const ReductionOperatorT<double>& op, const DctTensorT<double>& x,
            const MatrixD& upstream) {
    return (upstream.array() * forward(op, x).data.array()).sum();
}

}  // namespace

GradCheckReport grad_check(ReductionKind kind, Eigen::Index inChannels, Eigen::Index outChannels,
                           int trials, std::uint64_t seed, double step, double kinkBand) {
    GradCheckReport report;
    report.kind = kind;
    report.step = step;
    report.trials = trials;

    std::mt19937_64 rng(seed);
    double maxRel = 0.0;
    auto relError = [](double analytic, double numeric) {
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-3});
        return std::abs(analytic - numeric) / denom;
    };

    for (int trial = 0; trial < trials; ++trial) {
        auto op = ReductionOperatorT<double>::seeded(kind, inChannels, outChannels, rng());
        DctTensorT<double> x;
        x.rows = 2;
        x.cols = 2;
        x.data.resize(inChannels, x.positions());
        for (Eigen::Index r = 0; r < x.data.rows(); ++r)
            for (Eigen::Index c = 0; c < x.data.cols(); ++c) x.data(r, c) = uniform(rng, -1.0, 1.0);
        x.channelMeta.assign(static_cast<std::size_t>(inChannels), ChannelMeta{mixed_component, 0});

        MatrixD upstream(outChannels, x.positions());
        for (Eigen::Index r = 0; r < upstream.rows(); ++r)
            for (Eigen::Index c = 0; c < upstream.cols(); ++c) upstream(r, c) = uniform(rng, -1.0, 1.0);

        if (kind == ReductionKind::CCPP) {
            // zero the upstream gradient where the pre-activation sits at the
            // ReLU kink; the loss is then smooth in every checked parameter
            MatrixD pre = op.weights * x.data;
            pre.colwise() += op.bias;
            upstream = (pre.array().abs() > kinkBand).template cast<double>() * upstream.array();
        }

        const auto grads = backward(op, x, upstream);

        auto checkEntry = [&](double& slot, double analytic) {
            const double saved = slot;
            slot = saved + step;
            const double plus = loss(op, x, upstream);
            slot = saved - step;
            const double minus = loss(op, x, upstream);
            slot = saved;
            const double numeric = (plus - minus) / (2.0 * step);
            maxRel = std::max(maxRel, relError(analytic, numeric));
        };

        for (Eigen::Index r = 0; r < x.data.rows(); ++r)
            for (Eigen::Index c = 0; c < x.data.cols(); ++c)
                checkEntry(x.data(r, c), grads.gradInput(r, c));
        for (Eigen::Index r = 0; r < op.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < op.weights.cols(); ++c)
                checkEntry(op.weights(r, c), grads.gradWeights(r, c));
        for (Eigen::Index k = 0; k < op.bias.size(); ++k)
            checkEntry(op.bias(k), grads.gradBias(k));
    }

    report.maxRelError = maxRel;
    report.pass = maxRel < 1e-4;
    return report;
}

void save_operator(const ReductionOperator& op, const std::string& path) {
    op.validate();
    DctTensor t;
    const bool hasBias = op.kind == ReductionKind::CCPP;
    t.rows = op.weights.rows();
    t.cols = op.weights.cols() + (hasBias ? 1 : 0);
    t.data.resize(1, t.positions());
    DctTensor::Matrix packed(t.rows, t.cols);
    packed.leftCols(op.weights.cols()) = op.weights;
    if (hasBias) packed.col(t.cols - 1) = op.bias;
    t.data = Eigen::Map<const DctTensor::Matrix>(packed.data(), 1, t.positions());
    t.channelMeta = {{static_cast<std::uint8_t>(op.kind), 0}};
    t.cropWidth = static_cast<std::uint32_t>(op.inChannels);
    t.cropHeight = static_cast<std::uint32_t>(op.outChannels);
    write_tensor_file(t, path);
}

ReductionOperator load_operator(const std::string& path) {
    const DctTensor t = read_tensor_file(path);
    if (t.channels() != 1 || t.channelMeta.size() != 1)
        throw Error(ErrorCode::FormatVersionMismatch, "not an operator weight file");
    const std::uint8_t tag = t.channelMeta[0].componentCode;
    if (tag != static_cast<std::uint8_t>(ReductionKind::LP) &&
        tag != static_cast<std::uint8_t>(ReductionKind::LA) &&
        tag != static_cast<std::uint8_t>(ReductionKind::CCPP))
        throw Error(ErrorCode::FormatVersionMismatch, "unknown operator kind tag");

    ReductionOperator op;
    op.kind = static_cast<ReductionKind>(tag);
    op.inChannels = static_cast<Eigen::Index>(t.cropWidth);
    op.outChannels = static_cast<Eigen::Index>(t.cropHeight);
    const bool hasBias = op.kind == ReductionKind::CCPP;
    const Eigen::Index weightCols = t.cols - (hasBias ? 1 : 0);
    const auto packed = Eigen::Map<const DctTensor::Matrix>(t.data.data(), t.rows, t.cols);
    op.weights = packed.leftCols(weightCols);
    if (hasBias) op.bias = packed.col(t.cols - 1);
    op.validate();
    return op;
}

}  // namespace dctpipe::ops
