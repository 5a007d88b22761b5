#pragma once

#include <vector>

#include "dctpipe/dct_tensor.hpp"

namespace dctpipe {

/// Per-channel affine standardization statistics computed from a corpus pass.
/// Stored in the DCTT container as an (channels x 2 x 1) tensor whose payload
/// per channel is [mean, std] and whose channelMeta mirrors the tensors it
/// standardizes.
struct ChannelStats {
    Eigen::VectorXf mean;
    Eigen::VectorXf stddev;
    std::vector<ChannelMeta> channelMeta;

    DctTensor to_tensor() const;
    static ChannelStats from_tensor(const DctTensor& t);
};

class ChannelStatsAccumulator {
public:
    void add(const DctTensor& t);
    ChannelStats finalize() const;

private:
    Eigen::VectorXd sum_;
    Eigen::VectorXd sumSq_;
    long count_ = 0;  // spatial positions accumulated per channel
    std::vector<ChannelMeta> channelMeta_;
};

/// (x - mean) / std per channel, matched by (component, frequency) provenance
/// so stats computed on a full tensor apply to any selected subset of it.
DctTensor standardize(const DctTensor& t, const ChannelStats& stats);

}  // namespace dctpipe
