#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <string>

#include "dctpipe/dct_tensor.hpp"
#include "dctpipe/error.hpp"

namespace dctpipe::ops {

enum class ReductionKind : std::uint8_t { LP = 10, LA = 11, CCPP = 12 };

inline const char* reduction_kind_name(ReductionKind kind) {
    switch (kind) {
        case ReductionKind::LP: return "lp";
        case ReductionKind::LA: return "la";
        case ReductionKind::CCPP: return "ccpp";
    }
    return "?";
}

/// Pointwise channel-reduction operator. Weight shape by kind:
///   LP    m x n matrix, y(p) = W x(p), no bias
///   LA    m x (n/m) matrix, grouped softmax attention over channel groups
///   CCPP  m x n matrix plus length-m bias, y(p) = max(0, W x(p) + b)
template <typename Scalar>
struct ReductionOperatorT {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;

    ReductionKind kind = ReductionKind::LP;
    Eigen::Index inChannels = 0;
    Eigen::Index outChannels = 0;
    Matrix weights;
    Vector bias;  // CCPP only

    Eigen::Index group_size() const { return inChannels / outChannels; }

    void validate() const {
        if (inChannels < 1 || outChannels < 1)
            throw Error(ErrorCode::ShapeMismatch, "operator needs positive channel counts");
        if (kind == ReductionKind::LA) {
            if (inChannels % outChannels != 0)
                throw Error(ErrorCode::GroupSizeError,
                            std::to_string(outChannels) + " does not divide " + std::to_string(inChannels));
            if (weights.rows() != outChannels || weights.cols() != group_size())
                throw Error(ErrorCode::ShapeMismatch, "LA weights must be m x (n/m)");
        } else {
            if (weights.rows() != outChannels || weights.cols() != inChannels)
                throw Error(ErrorCode::ShapeMismatch, "weights must be m x n");
        }
        if (kind == ReductionKind::CCPP) {
            if (bias.size() != outChannels)
                throw Error(ErrorCode::ShapeMismatch, "CCPP bias must have length m");
        } else if (bias.size() != 0) {
            throw Error(ErrorCode::ShapeMismatch, "only CCPP carries a bias");
        }
        if (!weights.allFinite() || !bias.allFinite())
            throw Error(ErrorCode::ShapeMismatch, "non-finite operator weights");
    }

    /// Deterministic seeded init, uniform in [-1/sqrt(n), +1/sqrt(n)].
    /// The raw mt19937_64 stream is mapped to doubles directly so the values
    /// are identical across standard library implementations.
    static ReductionOperatorT seeded(ReductionKind kind, Eigen::Index n, Eigen::Index m,
                                     std::uint64_t seed) {
        ReductionOperatorT op;
        op.kind = kind;
        op.inChannels = n;
        op.outChannels = m;
        if (kind == ReductionKind::LA && (m < 1 || n % m != 0))
            throw Error(ErrorCode::GroupSizeError,
                        std::to_string(m) + " does not divide " + std::to_string(n));
        std::mt19937_64 rng(seed);
        const double bound = 1.0 / std::sqrt(static_cast<double>(n));
        auto draw = [&] {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
            return static_cast<Scalar>((2.0 * u - 1.0) * bound);
        };
        op.weights.resize(m, kind == ReductionKind::LA ? n / m : n);
        for (Eigen::Index r = 0; r < op.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < op.weights.cols(); ++c) op.weights(r, c) = draw();
        if (kind == ReductionKind::CCPP) {
            op.bias.resize(m);
            for (Eigen::Index r = 0; r < m; ++r) op.bias(r) = draw();
        }
        op.validate();
        return op;
    }

    template <typename Other>
    ReductionOperatorT<Other> cast() const {
        ReductionOperatorT<Other> out;
        out.kind = kind;
        out.inChannels = inChannels;
        out.outChannels = outChannels;
        out.weights = weights.template cast<Other>();
        out.bias = bias.template cast<Other>();
        return out;
    }
};

using ReductionOperator = ReductionOperatorT<float>;

namespace detail {

template <typename Scalar>
void check_input(const ReductionOperatorT<Scalar>& op, const DctTensorT<Scalar>& x) {
    op.validate();
    if (x.channels() != op.inChannels)
        throw Error(ErrorCode::ShapeMismatch,
                    "input has " + std::to_string(x.channels()) + " channels, operator expects " +
                        std::to_string(op.inChannels));
}

template <typename Scalar>
DctTensorT<Scalar> make_output(const DctTensorT<Scalar>& x, Eigen::Index outChannels) {
    DctTensorT<Scalar> y;
    y.rows = x.rows;
    y.cols = x.cols;
    y.cropWidth = x.cropWidth;
    y.cropHeight = x.cropHeight;
    y.data.resize(outChannels, x.positions());
    y.channelMeta.resize(static_cast<std::size_t>(outChannels));
    for (Eigen::Index k = 0; k < outChannels; ++k)
        y.channelMeta[static_cast<std::size_t>(k)] = {mixed_component, static_cast<std::uint8_t>(k)};
    return y;
}

}  // namespace detail

/// y(p) = W x(p) at every spatial position; no bias, no nonlinearity.
template <typename Scalar>
DctTensorT<Scalar> lp_forward(const ReductionOperatorT<Scalar>& op, const DctTensorT<Scalar>& x) {
    if (op.kind != ReductionKind::LP) throw Error(ErrorCode::ShapeMismatch, "operator is not LP");
    detail::check_input(op, x);
    DctTensorT<Scalar> y = detail::make_output(x, op.outChannels);
    y.data.noalias() = op.weights * x.data;
    return y;
}

/// Per-group, per-position attention coefficients of the LA operator,
/// shaped like the input (n x positions); rows of each group sum to 1
/// column-wise.
template <typename Scalar>
typename DctTensorT<Scalar>::Matrix la_attention(const ReductionOperatorT<Scalar>& op,
                                                 const DctTensorT<Scalar>& x) {
    if (op.kind != ReductionKind::LA) throw Error(ErrorCode::ShapeMismatch, "operator is not LA");
    detail::check_input(op, x);
    const Eigen::Index g = op.group_size();
    typename DctTensorT<Scalar>::Matrix attention(x.channels(), x.positions());
    for (Eigen::Index i = 0; i < op.outChannels; ++i) {
        auto group = x.data.middleRows(i * g, g).array();
        auto scores = (group.colwise() * op.weights.row(i).transpose().array()).eval();
        auto shifted = (scores.rowwise() - scores.colwise().maxCoeff()).exp().eval();
        attention.middleRows(i * g, g) =
            (shifted.rowwise() / shifted.colwise().sum()).matrix();
    }
    return attention;
}

/// Grouped local attention: scores s_i = W_i ⊙ r_i, softmax over each group,
/// y_i(p) = sum_j a_ij(p) r_ij(p).
template <typename Scalar>
DctTensorT<Scalar> la_forward(const ReductionOperatorT<Scalar>& op, const DctTensorT<Scalar>& x) {
    const auto attention = la_attention(op, x);
    const Eigen::Index g = op.group_size();
    DctTensorT<Scalar> y = detail::make_output(x, op.outChannels);
    for (Eigen::Index i = 0; i < op.outChannels; ++i)
        y.data.row(i) = (attention.middleRows(i * g, g).array() * x.data.middleRows(i * g, g).array())
                            .colwise()
                            .sum();
    return y;
}

/// Cross-channel parametric pooling: y(p) = max(0, W x(p) + b).
template <typename Scalar>
DctTensorT<Scalar> ccpp_forward(const ReductionOperatorT<Scalar>& op, const DctTensorT<Scalar>& x) {
    if (op.kind != ReductionKind::CCPP) throw Error(ErrorCode::ShapeMismatch, "operator is not CCPP");
    detail::check_input(op, x);
    DctTensorT<Scalar> y = detail::make_output(x, op.outChannels);
    y.data.noalias() = op.weights * x.data;
    y.data.colwise() += op.bias;
    y.data = y.data.cwiseMax(Scalar(0));
    return y;
}

template <typename Scalar>
DctTensorT<Scalar> forward(const ReductionOperatorT<Scalar>& op, const DctTensorT<Scalar>& x) {
    switch (op.kind) {
        case ReductionKind::LP: return lp_forward(op, x);
        case ReductionKind::LA: return la_forward(op, x);
        case ReductionKind::CCPP: return ccpp_forward(op, x);
    }
    throw Error(ErrorCode::ShapeMismatch, "unknown operator kind");
}

template <typename Scalar>
struct ReductionGradients {
    using Matrix = typename ReductionOperatorT<Scalar>::Matrix;
    using Vector = typename ReductionOperatorT<Scalar>::Vector;

    Matrix gradInput;    // n x positions
    Matrix gradWeights;  // shaped like op.weights
    Vector gradBias;     // length m for CCPP, empty otherwise
};

/// Analytic gradients of L = <upstream, y> with respect to the input and the
/// operator parameters.
template <typename Scalar>
ReductionGradients<Scalar> backward(const ReductionOperatorT<Scalar>& op, const DctTensorT<Scalar>& x,
                                    const typename DctTensorT<Scalar>::Matrix& upstream) {
    detail::check_input(op, x);
    if (upstream.rows() != op.outChannels || upstream.cols() != x.positions())
        throw Error(ErrorCode::ShapeMismatch, "upstream gradient shape mismatch");

    ReductionGradients<Scalar> grads;
    switch (op.kind) {
        case ReductionKind::LP: {
            grads.gradInput.noalias() = op.weights.transpose() * upstream;
            grads.gradWeights.noalias() = upstream * x.data.transpose();
            break;
        }
        case ReductionKind::CCPP: {
            typename ReductionGradients<Scalar>::Matrix pre = op.weights * x.data;
            pre.colwise() += op.bias;
            const auto mask = (pre.array() > Scalar(0)).template cast<Scalar>();
            const typename ReductionGradients<Scalar>::Matrix gPre =
                (upstream.array() * mask).matrix();
            grads.gradInput.noalias() = op.weights.transpose() * gPre;
            grads.gradWeights.noalias() = gPre * x.data.transpose();
            grads.gradBias = gPre.rowwise().sum();
            break;
        }
        case ReductionKind::LA: {
            // per group i, position p:
            //   d y_i / d r_j = a_j (1 + w_j (r_j - y_i))
            //   d y_i / d w_j = a_j r_j (r_j - y_i)
            const Eigen::Index g = op.group_size();
            const auto attention = la_attention(op, x);
            grads.gradInput.resize(x.channels(), x.positions());
            grads.gradWeights.setZero(op.weights.rows(), op.weights.cols());
            for (Eigen::Index i = 0; i < op.outChannels; ++i) {
                auto r = x.data.middleRows(i * g, g).array();
                auto a = attention.middleRows(i * g, g).array();
                const auto y = (a * r).colwise().sum().eval();  // 1 x positions
                auto rMinusY = (r.rowwise() - y.row(0)).eval();
                auto w = op.weights.row(i).transpose().array();
                grads.gradInput.middleRows(i * g, g) =
                    (a * ((rMinusY.colwise() * w) + Scalar(1)))
                        .rowwise() * upstream.row(i).array();
                grads.gradWeights.row(i) =
                    ((a * r * rMinusY).rowwise() * upstream.row(i).array()).rowwise().sum();
            }
            break;
        }
    }
    return grads;
}

struct GradCheckReport {
    ReductionKind kind = ReductionKind::LP;
    double step = 1e-5;
    double maxRelError = 0.0;
    int trials = 0;
    bool pass = false;
};

/// Compares analytic gradients against central finite differences on random
/// small tensors (double precision). Pass iff the max relative error over all
/// input/weight/bias entries stays below 1e-4. CCPP entries whose
/// pre-activation sits within `kinkBand` of the ReLU kink are excluded by
/// zeroing their upstream gradient.
GradCheckReport grad_check(ReductionKind kind, Eigen::Index inChannels, Eigen::Index outChannels,
                           int trials, std::uint64_t seed, double step = 1e-5,
                           double kinkBand = 1e-3);

/// DCTT-container weight files: payload is W row-major (CCPP appends the bias
/// as a trailing column), the kind tag rides in channelMeta[0].componentCode,
/// cropExtent records (inChannels, outChannels).
void save_operator(const ReductionOperator& op, const std::string& path);
ReductionOperator load_operator(const std::string& path);

}  // namespace dctpipe::ops
