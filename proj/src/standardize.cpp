#include "dctpipe/standardize.hpp"

#include <cmath>

#include "dctpipe/error.hpp"

namespace dctpipe {

DctTensor ChannelStats::to_tensor() const {
    DctTensor t;
    t.rows = 2;
    t.cols = 1;
    t.data.resize(mean.size(), 2);
    t.data.col(0) = mean;
    t.data.col(1) = stddev;
    t.channelMeta = channelMeta;
    return t;
}

ChannelStats ChannelStats::from_tensor(const DctTensor& t) {
    if (t.rows != 2 || t.cols != 1)
        throw Error(ErrorCode::FormatVersionMismatch, "not a channel-stats tensor");
    ChannelStats stats;
    stats.mean = t.data.col(0);
    stats.stddev = t.data.col(1);
    stats.channelMeta = t.channelMeta;
    return stats;
}

void ChannelStatsAccumulator::add(const DctTensor& t) {
    if (count_ == 0) {
        channelMeta_ = t.channelMeta;
        sum_ = Eigen::VectorXd::Zero(t.channels());
        sumSq_ = Eigen::VectorXd::Zero(t.channels());
    }
    if (t.channelMeta != channelMeta_)
        throw Error(ErrorCode::DimensionMismatch, "corpus tensors disagree on channel provenance");
    sum_ += t.data.cast<double>().rowwise().sum();
    sumSq_ += t.data.cast<double>().cwiseAbs2().rowwise().sum();
    count_ += t.positions();
}

ChannelStats ChannelStatsAccumulator::finalize() const {
    if (count_ == 0) throw Error(ErrorCode::EmptyCorpus, "no tensors accumulated");
    ChannelStats stats;
    stats.channelMeta = channelMeta_;
    const double n = static_cast<double>(count_);
    stats.mean = (sum_ / n).cast<float>();
    Eigen::VectorXd var = sumSq_ / n - (sum_ / n).cwiseAbs2();
    stats.stddev = var.cwiseMax(0.0).cwiseSqrt().cwiseMax(1e-8).cast<float>();
    return stats;
}

DctTensor standardize(const DctTensor& t, const ChannelStats& stats) {
    DctTensor out = t;
    for (Eigen::Index ch = 0; ch < t.channels(); ++ch) {
        const ChannelMeta& meta = t.channelMeta[static_cast<std::size_t>(ch)];
        Eigen::Index match = -1;
        for (std::size_t s = 0; s < stats.channelMeta.size(); ++s)
            if (stats.channelMeta[s] == meta) {
                match = static_cast<Eigen::Index>(s);
                break;
            }
        if (match < 0)
            throw Error(ErrorCode::DimensionMismatch,
                        "stats carry no entry for channel " + std::to_string(ch));
        out.data.row(ch) = (t.data.row(ch).array() - stats.mean(match)) / stats.stddev(match);
    }
    return out;
}

}  // namespace dctpipe
