#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "dctpipe/reduction.hpp"
#include "oracles.hpp"

using namespace dctpipe;
using namespace dctpipe::ops;

namespace {

template <typename Scalar>
DctTensorT<Scalar> random_input(Eigen::Index channels, Eigen::Index rows, Eigen::Index cols,
                                std::uint64_t seed) {
    DctTensorT<Scalar> t;
    t.rows = rows;
    t.cols = cols;
    t.data.resize(channels, rows * cols);
    std::mt19937_64 rng(seed);
    for (Eigen::Index i = 0; i < t.data.size(); ++i)
        t.data.data()[i] = static_cast<Scalar>(static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2 - 1);
    t.channelMeta.assign(static_cast<std::size_t>(channels), ChannelMeta{mixed_component, 0});
    return t;
}

}  // namespace

TEST_CASE("LP identity and selection matrices") {
    ReductionOperator op;
    op.kind = ReductionKind::LP;
    op.inChannels = 6;
    op.outChannels = 6;
    op.weights = ReductionOperator::Matrix::Identity(6, 6);
    const auto x = random_input<float>(6, 2, 3, 42);
    CHECK(lp_forward(op, x).data.isApprox(x.data));

    ReductionOperator pick;
    pick.kind = ReductionKind::LP;
    pick.inChannels = 6;
    pick.outChannels = 2;
    pick.weights = ReductionOperator::Matrix::Zero(2, 6);
    pick.weights(0, 4) = 1.f;
    pick.weights(1, 1) = 1.f;
    const auto y = lp_forward(pick, x);
    CHECK(y.data.row(0).isApprox(x.data.row(4)));
    CHECK(y.data.row(1).isApprox(x.data.row(1)));
}

TEST_CASE("LP is linear to machine precision") {
    const auto op = ReductionOperator::seeded(ReductionKind::LP, 24, 8, 99);
    auto x1 = random_input<float>(24, 2, 2, 1);
    auto x2 = random_input<float>(24, 2, 2, 2);
    const float a = 1.75f, b = -0.5f;
    DctTensor mix = x1;
    mix.data = a * x1.data + b * x2.data;
    const auto lhs = lp_forward(op, mix);
    const auto rhs = (a * lp_forward(op, x1).data + b * lp_forward(op, x2).data).eval();
    CHECK((lhs.data - rhs).cwiseAbs().maxCoeff() < 1e-5f);
}

TEST_CASE("forwards match the naive per-position oracles") {
    // single-precision inputs, double accumulation on both routes
    std::mt19937_64 seeds(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const auto seed = seeds();
        auto x = random_input<double>(12, 3, 2, seed);
        // round to float values, compute in double
        for (Eigen::Index i = 0; i < x.data.size(); ++i)
            x.data.data()[i] = static_cast<double>(static_cast<float>(x.data.data()[i]));

        const auto lp = ReductionOperatorT<double>::seeded(ReductionKind::LP, 12, 4, seed ^ 1);
        const auto la = ReductionOperatorT<double>::seeded(ReductionKind::LA, 12, 4, seed ^ 2);
        const auto ccpp = ReductionOperatorT<double>::seeded(ReductionKind::CCPP, 12, 4, seed ^ 3);

        CHECK((lp_forward(lp, x).data - testoracle::lp_loops(lp, x)).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((la_forward(la, x).data - testoracle::la_loops(la, x)).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((ccpp_forward(ccpp, x).data - testoracle::ccpp_loops(ccpp, x)).cwiseAbs().maxCoeff() <
              1e-6);
    }
}

TEST_CASE("LA degenerate group size one is the identity") {
    const auto op = ReductionOperatorT<double>::seeded(ReductionKind::LA, 5, 5, 7);
    const auto x = random_input<double>(5, 2, 2, 8);
    CHECK(la_forward(op, x).data.isApprox(x.data));

    // gradX = upstream, gradW = 0 in the same regime
    ReductionOperatorT<double>::Matrix upstream =
        ReductionOperatorT<double>::Matrix::Random(5, x.positions());
    const auto grads = backward(op, x, upstream);
    CHECK(grads.gradInput.isApprox(upstream));
    CHECK(grads.gradWeights.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("LA with zero weights averages each group") {
    ReductionOperatorT<double> op;
    op.kind = ReductionKind::LA;
    op.inChannels = 12;
    op.outChannels = 4;
    op.weights = ReductionOperatorT<double>::Matrix::Zero(4, 3);
    const auto x = random_input<double>(12, 2, 2, 17);
    const auto y = la_forward(op, x);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK((y.data.row(i) - x.data.middleRows(i * 3, 3).colwise().mean()).cwiseAbs().maxCoeff() <
              1e-12);
}

TEST_CASE("LA attention rows sum to one and lie in (0,1)") {
    const auto op = ReductionOperatorT<double>::seeded(ReductionKind::LA, 192, 64, 5);
    const auto x = random_input<double>(192, 3, 3, 6);
    const auto attention = la_attention(op, x);
    for (Eigen::Index i = 0; i < 64; ++i) {
        const auto sums = attention.middleRows(i * 3, 3).colwise().sum().eval();
        for (Eigen::Index p = 0; p < x.positions(); ++p) CHECK(sums(p) == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(attention.minCoeff() > 0.0);
    CHECK(attention.maxCoeff() < 1.0);
}

TEST_CASE("LA attention is invariant to a uniform score shift") {
    // all-ones input makes the scores equal the weights; shifting every
    // weight in a group shifts the scores uniformly
    ReductionOperatorT<double> op;
    op.kind = ReductionKind::LA;
    op.inChannels = 8;
    op.outChannels = 2;
    op.weights = ReductionOperatorT<double>::Matrix::Random(2, 4);
    DctTensorT<double> ones;
    ones.rows = 2;
    ones.cols = 1;
    ones.data = DctTensorT<double>::Matrix::Ones(8, 2);
    ones.channelMeta.assign(8, ChannelMeta{mixed_component, 0});

    auto shifted = op;
    shifted.weights.array() += 3.7;
    CHECK(la_attention(op, ones).isApprox(la_attention(shifted, ones), 1e-12));
    CHECK(la_forward(op, ones).data.isApprox(la_forward(shifted, ones).data, 1e-12));
}

TEST_CASE("CCPP reduces to ReLU under identity weights") {
    ReductionOperator op;
    op.kind = ReductionKind::CCPP;
    op.inChannels = 6;
    op.outChannels = 6;
    op.weights = ReductionOperator::Matrix::Identity(6, 6);
    op.bias = ReductionOperator::Vector::Zero(6);
    auto x = random_input<float>(6, 2, 2, 21);
    const auto y = ccpp_forward(op, x);
    CHECK(y.data.isApprox(x.data.cwiseMax(0.f)));

    // a large negative bias kills its channel
    op.bias(2) = -100.f;
    CHECK(ccpp_forward(op, x).data.row(2).cwiseAbs().maxCoeff() == 0.f);
}

TEST_CASE("CCPP outputs are nonnegative") {
    const auto op = ReductionOperator::seeded(ReductionKind::CCPP, 192, 64, 31);
    const auto x = random_input<float>(192, 4, 4, 32);
    CHECK(ccpp_forward(op, x).data.minCoeff() >= 0.f);
}

TEST_CASE("forwards are spatially pointwise") {
    const auto op = ReductionOperatorT<double>::seeded(ReductionKind::LA, 12, 4, 77);
    auto x = random_input<double>(12, 2, 3, 78);
    // permute spatial positions
    std::vector<Eigen::Index> perm = {3, 0, 5, 1, 4, 2};
    DctTensorT<double> shuffled = x;
    for (std::size_t p = 0; p < perm.size(); ++p)
        shuffled.data.col(static_cast<Eigen::Index>(p)) = x.data.col(perm[p]);
    const auto y = la_forward(op, x);
    const auto yShuffled = la_forward(op, shuffled);
    for (std::size_t p = 0; p < perm.size(); ++p)
        CHECK((yShuffled.data.col(static_cast<Eigen::Index>(p)) - y.data.col(perm[p]))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
}

TEST_CASE("backward matches brute-force oracle gradients") {
    for (const auto kind : {ReductionKind::LP, ReductionKind::LA, ReductionKind::CCPP}) {
        const auto op = ReductionOperatorT<double>::seeded(kind, 12, 4, 1001);
        const auto x = random_input<double>(12, 2, 2, 1002);
        ReductionOperatorT<double>::Matrix upstream =
            ReductionOperatorT<double>::Matrix::Random(4, x.positions());
        const auto grads = backward(op, x, upstream);
        const auto oracle = testoracle::gradients_loops(op, x, upstream);
        CHECK((grads.gradInput - oracle.gradInput).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((grads.gradWeights - oracle.gradWeights).cwiseAbs().maxCoeff() < 1e-9);
        if (kind == ReductionKind::CCPP)
            CHECK((grads.gradBias - oracle.gradBias).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("CCPP backward is zero in the dead-ReLU region") {
    ReductionOperatorT<double> op;
    op.kind = ReductionKind::CCPP;
    op.inChannels = 4;
    op.outChannels = 2;
    op.weights = ReductionOperatorT<double>::Matrix::Constant(2, 4, 0.1);
    op.bias = ReductionOperatorT<double>::Vector::Constant(2, -100.0);
    const auto x = random_input<double>(4, 2, 2, 55);
    ReductionOperatorT<double>::Matrix upstream =
        ReductionOperatorT<double>::Matrix::Ones(2, x.positions());
    const auto grads = backward(op, x, upstream);
    CHECK(grads.gradInput.cwiseAbs().maxCoeff() == 0.0);
    CHECK(grads.gradWeights.cwiseAbs().maxCoeff() == 0.0);
    CHECK(grads.gradBias.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient checks pass for all three operators") {
    for (const auto kind : {ReductionKind::LP, ReductionKind::LA, ReductionKind::CCPP}) {
        const auto report = grad_check(kind, 12, 4, 10, 424242);
        INFO("kind ", reduction_kind_name(kind), " max_rel_err ", report.maxRelError);
        CHECK(report.pass);
        CHECK(report.maxRelError < 1e-4);
    }
}

TEST_CASE("shape and group-size errors are typed") {
    const auto op = ReductionOperator::seeded(ReductionKind::LP, 8, 4, 3);
    const auto x = random_input<float>(6, 1, 1, 4);
    CHECK_THROWS_AS((void)lp_forward(op, x), Error);
    CHECK_THROWS_AS((void)ReductionOperator::seeded(ReductionKind::LA, 100, 64, 3), Error);
    try {
        (void)ReductionOperator::seeded(ReductionKind::LA, 100, 64, 3);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GroupSizeError);
    }
}

TEST_CASE("operator weights roundtrip through the DCTT container") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "dctpipe_optest";
    fs::create_directories(dir);
    for (const auto kind : {ReductionKind::LP, ReductionKind::LA, ReductionKind::CCPP}) {
        const auto op = ReductionOperator::seeded(kind, 192, 64, 9);
        const std::string path = (dir / (std::string(reduction_kind_name(kind)) + ".dctt")).string();
        save_operator(op, path);
        const auto back = load_operator(path);
        CHECK(back.kind == op.kind);
        CHECK(back.inChannels == op.inChannels);
        CHECK(back.outChannels == op.outChannels);
        CHECK(back.weights.isApprox(op.weights));
        if (kind == ReductionKind::CCPP) CHECK(back.bias.isApprox(op.bias));
    }
    fs::remove_all(dir);
}
