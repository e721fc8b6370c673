// Every analytic gradient in the stack is checked against central finite
// differences through a scalar loss.

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "loadcast/nn/layers.hpp"
#include "loadcast/nn/loss.hpp"
#include "loadcast/nn/tensor.hpp"
#include "loadcast/rng.hpp"
#include "support/oracles.hpp"

using namespace loadcast;
using nn::Matrix;
using nn::Tensor3;

namespace {

constexpr double kStep = 1e-4;
constexpr double kTol = 1e-3;  // relative, with an absolute floor

bool close(double analytic, double numeric) {
    const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
    return std::fabs(analytic - numeric) / denom <= kTol;
}

Matrix random_matrix(std::size_t r, std::size_t c, SeededRng& rng) {
    Matrix m(r, c);
    for (double& x : m.v) x = rng.uniform(-1.0, 1.0);
    return m;
}

Tensor3 random_tensor(std::size_t b, std::size_t t, std::size_t f, SeededRng& rng) {
    Tensor3 x(b, t, f);
    for (double& v : x.v) v = rng.uniform(-1.0, 1.0);
    return x;
}

// Checks d(loss)/d(array[i]) for every i by perturbing through `loss`.
void check_array(std::vector<double>& array, const std::vector<double>& analytic,
                 const std::function<double()>& loss) {
    REQUIRE(array.size() == analytic.size());
    for (std::size_t i = 0; i < array.size(); ++i) {
        const double numeric = oracles::central_difference(
            [&](double x) {
                const double saved = array[i];
                array[i] = x;
                const double out = loss();
                array[i] = saved;
                return out;
            },
            array[i], kStep);
        INFO("index " << i << " analytic " << analytic[i] << " numeric " << numeric);
        REQUIRE(close(analytic[i], numeric));
    }
}

}  // namespace

TEST_CASE("mse loss gradient matches finite differences") {
    SeededRng rng(1);
    Matrix pred = random_matrix(3, 4, rng);
    const Matrix target = random_matrix(3, 4, rng);
    const Matrix g = nn::mse_loss_grad(pred, target);
    check_array(pred.v, g.v, [&] { return nn::mse_loss(pred, target); });
}

TEST_CASE("dense backward matches finite differences") {
    SeededRng rng(2);
    for (const auto act : {nn::Activation::Relu, nn::Activation::Linear}) {
        nn::DenseParams p = nn::make_dense(5, 3, act, rng);
        for (double& b : p.b) b = rng.uniform(-0.5, 0.5);
        Matrix x = random_matrix(4, 5, rng);
        const Matrix target = random_matrix(4, 3, rng);

        const auto loss = [&] { return nn::mse_loss(nn::dense_forward(x, p), target); };

        nn::DenseCache cache;
        const Matrix out = nn::dense_forward(x, p, &cache);
        nn::DenseGrad grad(p);
        const Matrix dx = nn::dense_backward(nn::mse_loss_grad(out, target), p, cache, grad);

        check_array(p.w.v, grad.w.v, loss);
        check_array(p.b, grad.b, loss);
        Matrix x_copy = x;
        check_array(x.v, dx.v, loss);
        (void)x_copy;
    }
}

TEST_CASE("attention backward matches finite differences") {
    SeededRng rng(3);
    nn::AttentionParams p = nn::make_attention(4, 2, 3, 0.0, rng);
    for (double& b : p.bq) b = rng.uniform(-0.3, 0.3);
    for (double& b : p.bk) b = rng.uniform(-0.3, 0.3);
    for (double& b : p.bv) b = rng.uniform(-0.3, 0.3);
    for (double& b : p.bo) b = rng.uniform(-0.3, 0.3);
    Tensor3 x = random_tensor(2, 3, 4, rng);
    const Matrix target = random_matrix(6, 4, rng);

    const auto loss = [&] {
        SeededRng drop(0);
        return nn::mse_loss(nn::attention_forward(x, p, false, drop).as_matrix(), target);
    };

    nn::AttentionCache cache;
    SeededRng drop(0);
    const Tensor3 out = nn::attention_forward(x, p, false, drop, &cache);
    nn::AttentionGrad grad(p);
    const Matrix dy = nn::mse_loss_grad(out.as_matrix(), target);
    const Tensor3 dx =
        nn::attention_backward(Tensor3::from_matrix(dy, 2, 3, 4), p, cache, grad);

    check_array(p.wq.v, grad.wq.v, loss);
    check_array(p.wk.v, grad.wk.v, loss);
    check_array(p.wv.v, grad.wv.v, loss);
    check_array(p.wo.v, grad.wo.v, loss);
    check_array(p.bq, grad.bq, loss);
    check_array(p.bk, grad.bk, loss);
    check_array(p.bv, grad.bv, loss);
    check_array(p.bo, grad.bo, loss);
    check_array(x.v, dx.v, loss);
}

TEST_CASE("attention backward matches finite differences with dropout active") {
    // A frozen mask (same dropout seed every call) keeps the function
    // deterministic, so finite differences remain valid.
    SeededRng rng(4);
    nn::AttentionParams p = nn::make_attention(4, 2, 2, 0.3, rng);
    Tensor3 x = random_tensor(2, 3, 4, rng);
    const Matrix target = random_matrix(6, 4, rng);

    const auto loss = [&] {
        SeededRng drop(42);
        return nn::mse_loss(nn::attention_forward(x, p, true, drop).as_matrix(), target);
    };

    nn::AttentionCache cache;
    SeededRng drop(42);
    const Tensor3 out = nn::attention_forward(x, p, true, drop, &cache);
    nn::AttentionGrad grad(p);
    const Matrix dy = nn::mse_loss_grad(out.as_matrix(), target);
    const Tensor3 dx =
        nn::attention_backward(Tensor3::from_matrix(dy, 2, 3, 4), p, cache, grad);

    check_array(p.wv.v, grad.wv.v, loss);
    check_array(p.wo.v, grad.wo.v, loss);
    check_array(x.v, dx.v, loss);
}

TEST_CASE("layer norm backward matches finite differences") {
    SeededRng rng(5);
    nn::LayerNormParams p = nn::make_layer_norm(6);
    for (double& g : p.gain) g = rng.uniform(0.5, 1.5);
    for (double& b : p.bias) b = rng.uniform(-0.5, 0.5);
    Tensor3 x = random_tensor(2, 2, 6, rng);
    const Matrix target = random_matrix(4, 6, rng);

    const auto loss = [&] {
        return nn::mse_loss(nn::layer_norm_forward(x, p).as_matrix(), target);
    };

    nn::LayerNormCache cache;
    const Tensor3 out = nn::layer_norm_forward(x, p, &cache);
    nn::LayerNormGrad grad(p);
    const Matrix dy = nn::mse_loss_grad(out.as_matrix(), target);
    const Tensor3 dx =
        nn::layer_norm_backward(Tensor3::from_matrix(dy, 2, 2, 6), p, cache, grad);

    check_array(p.gain, grad.gain, loss);
    check_array(p.bias, grad.bias, loss);
    check_array(x.v, dx.v, loss);
}

TEST_CASE("backward calls without a cached forward throw") {
    SeededRng rng(6);
    nn::AttentionParams ap = nn::make_attention(4, 2, 2, 0.0, rng);
    nn::AttentionGrad ag(ap);
    nn::AttentionCache empty_a;
    REQUIRE_THROWS_AS(nn::attention_backward(Tensor3(1, 2, 4), ap, empty_a, ag), UsageError);

    nn::LayerNormParams lp = nn::make_layer_norm(4);
    nn::LayerNormGrad lg(lp);
    nn::LayerNormCache empty_l;
    REQUIRE_THROWS_AS(nn::layer_norm_backward(Tensor3(1, 2, 4), lp, empty_l, lg), UsageError);
}
