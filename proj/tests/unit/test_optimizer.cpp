#include <cmath>

#include "doctest.h"
#include "sentpw/errors.hpp"
#include "sentpw/optimizer.hpp"
#include "support/fixtures.hpp"

using namespace sentpw;

namespace {

EncoderParams scalar_params(double value) {
    EncoderParams p;
    p.embedding = Matrix::Zero(3, 1);
    p.embedding(2, 0) = value;
    p.projection = Matrix::Constant(1, 1, value);
    p.bias = Vector::Constant(1, value);
    return p;
}

Gradients scalar_grads(double g) {
    Gradients gr;
    gr.d_embedding = Matrix::Zero(3, 1);
    gr.d_embedding(2, 0) = g;
    gr.d_embedding(0, 0) = g;  // ignored: PAD
    gr.d_projection = Matrix::Constant(1, 1, g);
    gr.d_bias = Vector::Constant(1, g);
    return gr;
}

}  // namespace

TEST_CASE("adam follows the textbook recurrence") {
    OptimizerConfig cfg;
    EncoderParams p = scalar_params(0.5);
    OptimizerState st = OptimizerState::zeros_like(p);
    double x = 0.5, m = 0.0, v = 0.0;
    const double grads[] = {0.3, -0.1, 0.7, 0.0, -2.0, 0.05};
    int t = 0;
    for (double g : grads) {
        ++t;
        m = 0.9 * m + 0.1 * g;
        v = 0.999 * v + 0.001 * g * g;
        const double mh = m / (1 - std::pow(0.9, t));
        const double vh = v / (1 - std::pow(0.999, t));
        x -= 1e-3 * mh / (std::sqrt(vh) + 1e-8);
        apply_update(p, scalar_grads(g), st, cfg);
        CHECK(p.embedding(2, 0) == doctest::Approx(x).epsilon(1e-12));
        CHECK(p.projection(0, 0) == doctest::Approx(x).epsilon(1e-12));
        CHECK(p.bias(0) == doctest::Approx(x).epsilon(1e-12));
        CHECK(p.embedding(0, 0) == 0.0);
    }
    CHECK(st.updates == 6);
}

TEST_CASE("first adam step moves by about the learning rate") {
    OptimizerConfig cfg;
    cfg.learning_rate = 0.01;
    EncoderParams p = scalar_params(0.0);
    OptimizerState st = OptimizerState::zeros_like(p);
    apply_update(p, scalar_grads(123.0), st, cfg);
    CHECK(p.projection(0, 0) == doctest::Approx(-0.01).epsilon(1e-6));
}

TEST_CASE("sgd with momentum") {
    OptimizerConfig cfg;
    cfg.kind = OptimizerKind::sgd_momentum;
    cfg.learning_rate = 0.1;
    cfg.momentum = 0.5;
    EncoderParams p = scalar_params(1.0);
    OptimizerState st = OptimizerState::zeros_like(p);
    apply_update(p, scalar_grads(1.0), st, cfg);
    CHECK(p.bias(0) == doctest::Approx(0.9));
    apply_update(p, scalar_grads(1.0), st, cfg);
    CHECK(p.bias(0) == doctest::Approx(0.75));  // velocity 1.5
}

TEST_CASE("optimizer config validation") {
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.beta1 = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = OptimizerConfig{};
    cfg.eps = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = OptimizerConfig{};
    cfg.momentum = -0.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK(parse_optimizer_kind("sgd_momentum") == OptimizerKind::sgd_momentum);
    CHECK_THROWS_AS(parse_optimizer_kind("rmsprop"), ConfigError);
}
