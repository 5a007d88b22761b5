#pragma once

// Independent brute-force oracles for the channel-reduction operators:
// scalar loops over positions and channels, double accumulation, no shared
// code with the Eigen implementations they check.

#include <cmath>
#include <vector>

#include "dctpipe/reduction.hpp"

namespace testoracle {

using dctpipe::DctTensorT;
using dctpipe::ops::ReductionKind;
using dctpipe::ops::ReductionOperatorT;
using MatrixD = ReductionOperatorT<double>::Matrix;

inline MatrixD lp_loops(const ReductionOperatorT<double>& op, const DctTensorT<double>& x) {
    MatrixD y(op.outChannels, x.positions());
    for (Eigen::Index p = 0; p < x.positions(); ++p)
        for (Eigen::Index i = 0; i < op.outChannels; ++i) {
            double acc = 0;
            for (Eigen::Index j = 0; j < op.inChannels; ++j) acc += op.weights(i, j) * x.data(j, p);
            y(i, p) = acc;
        }
    return y;
}

inline MatrixD ccpp_loops(const ReductionOperatorT<double>& op, const DctTensorT<double>& x) {
    MatrixD y(op.outChannels, x.positions());
    for (Eigen::Index p = 0; p < x.positions(); ++p)
        for (Eigen::Index k = 0; k < op.outChannels; ++k) {
            double acc = op.bias(k);
            for (Eigen::Index j = 0; j < op.inChannels; ++j) acc += op.weights(k, j) * x.data(j, p);
            y(k, p) = acc > 0 ? acc : 0;
        }
    return y;
}

inline MatrixD la_loops(const ReductionOperatorT<double>& op, const DctTensorT<double>& x) {
    const Eigen::Index g = op.inChannels / op.outChannels;
    MatrixD y(op.outChannels, x.positions());
    for (Eigen::Index p = 0; p < x.positions(); ++p) {
        for (Eigen::Index i = 0; i < op.outChannels; ++i) {
            std::vector<double> scores(static_cast<std::size_t>(g));
            double maxScore = -1e300;
            for (Eigen::Index j = 0; j < g; ++j) {
                scores[static_cast<std::size_t>(j)] = op.weights(i, j) * x.data(i * g + j, p);
                maxScore = std::max(maxScore, scores[static_cast<std::size_t>(j)]);
            }
            double denom = 0;
            for (Eigen::Index j = 0; j < g; ++j)
                denom += std::exp(scores[static_cast<std::size_t>(j)] - maxScore);
            double acc = 0;
            for (Eigen::Index j = 0; j < g; ++j) {
                const double a = std::exp(scores[static_cast<std::size_t>(j)] - maxScore) / denom;
                acc += a * x.data(i * g + j, p);
            }
            y(i, p) = acc;
        }
    }
    return y;
}

struct OracleGradients {
    MatrixD gradInput;
    MatrixD gradWeights;
    ReductionOperatorT<double>::Vector gradBias;
};

/// Scalar-loop gradients of L = <upstream, forward(op, x)>.
inline OracleGradients gradients_loops(const ReductionOperatorT<double>& op,
                                       const DctTensorT<double>& x, const MatrixD& upstream) {
    OracleGradients out;
    out.gradInput = MatrixD::Zero(op.inChannels, x.positions());
    out.gradWeights = MatrixD::Zero(op.weights.rows(), op.weights.cols());
    if (op.kind == ReductionKind::CCPP)
        out.gradBias = ReductionOperatorT<double>::Vector::Zero(op.outChannels);

    switch (op.kind) {
        case ReductionKind::LP: {
            for (Eigen::Index p = 0; p < x.positions(); ++p)
                for (Eigen::Index i = 0; i < op.outChannels; ++i)
                    for (Eigen::Index j = 0; j < op.inChannels; ++j) {
                        out.gradInput(j, p) += op.weights(i, j) * upstream(i, p);
                        out.gradWeights(i, j) += upstream(i, p) * x.data(j, p);
                    }
            break;
        }
        case ReductionKind::CCPP: {
            for (Eigen::Index p = 0; p < x.positions(); ++p)
                for (Eigen::Index k = 0; k < op.outChannels; ++k) {
                    double pre = op.bias(k);
                    for (Eigen::Index j = 0; j < op.inChannels; ++j)
                        pre += op.weights(k, j) * x.data(j, p);
                    if (pre <= 0) continue;
                    out.gradBias(k) += upstream(k, p);
                    for (Eigen::Index j = 0; j < op.inChannels; ++j) {
                        out.gradInput(j, p) += op.weights(k, j) * upstream(k, p);
                        out.gradWeights(k, j) += upstream(k, p) * x.data(j, p);
                    }
                }
            break;
        }
        case ReductionKind::LA: {
            const Eigen::Index g = op.inChannels / op.outChannels;
            for (Eigen::Index p = 0; p < x.positions(); ++p)
                for (Eigen::Index i = 0; i < op.outChannels; ++i) {
                    std::vector<double> a(static_cast<std::size_t>(g));
                    double maxScore = -1e300;
                    for (Eigen::Index j = 0; j < g; ++j)
                        maxScore = std::max(maxScore, op.weights(i, j) * x.data(i * g + j, p));
                    double denom = 0;
                    for (Eigen::Index j = 0; j < g; ++j) {
                        a[static_cast<std::size_t>(j)] =
                            std::exp(op.weights(i, j) * x.data(i * g + j, p) - maxScore);
                        denom += a[static_cast<std::size_t>(j)];
                    }
                    double y = 0;
                    for (Eigen::Index j = 0; j < g; ++j) {
                        a[static_cast<std::size_t>(j)] /= denom;
                        y += a[static_cast<std::size_t>(j)] * x.data(i * g + j, p);
                    }
                    for (Eigen::Index j = 0; j < g; ++j) {
                        const double r = x.data(i * g + j, p);
                        const double aj = a[static_cast<std::size_t>(j)];
                        out.gradInput(i * g + j, p) +=
                            upstream(i, p) * aj * (1.0 + op.weights(i, j) * (r - y));
                        out.gradWeights(i, j) += upstream(i, p) * aj * r * (r - y);
                    }
                }
            break;
        }
    }
    return out;
}

}  // namespace testoracle
