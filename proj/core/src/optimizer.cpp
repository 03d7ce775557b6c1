#include "sentpw/optimizer.hpp"

#include <cmath>

#include "sentpw/errors.hpp"

namespace sentpw {

OptimizerKind parse_optimizer_kind(std::string_view name) {
    if (name == "adam") return OptimizerKind::adam;
    if (name == "sgd_momentum") return OptimizerKind::sgd_momentum;
    throw ConfigError("unknown optimizer '" + std::string(name) +
                      "' (expected adam or sgd_momentum)");
}

std::string_view to_string(OptimizerKind kind) {
    return kind == OptimizerKind::adam ? "adam" : "sgd_momentum";
}

void OptimizerConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be finite and >= 0");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ConfigError("adam betas must be in [0, 1)");
    }
    if (!(eps > 0.0)) throw ConfigError("adam eps must be > 0");
}

OptimizerState OptimizerState::zeros_like(const EncoderParams& params) {
    return {Gradients::zeros_like(params), Gradients::zeros_like(params), 0};
}

namespace {

template <typename Param, typename Grad>
void adam_step(Param& p, const Grad& g, Param& m, Param& v, const OptimizerConfig& cfg,
               double correction1, double correction2) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    const double step = cfg.learning_rate / correction1;
    p.array() -= step * m.array() / ((v.array() / correction2).sqrt() + cfg.eps);
}

template <typename Param, typename Grad>
void momentum_step(Param& p, const Grad& g, Param& velocity, const OptimizerConfig& cfg) {
    velocity = cfg.momentum * velocity + g;
    p -= cfg.learning_rate * velocity;
}

}  // namespace

void apply_update(EncoderParams& params, const Gradients& grads, OptimizerState& state,
                  const OptimizerConfig& cfg) {
    ++state.updates;
    if (cfg.kind == OptimizerKind::adam) {
        const double t = static_cast<double>(state.updates);
        const double c1 = 1.0 - std::pow(cfg.beta1, t);
        const double c2 = 1.0 - std::pow(cfg.beta2, t);
        adam_step(params.embedding, grads.d_embedding, state.first.d_embedding,
                  state.second.d_embedding, cfg, c1, c2);
        adam_step(params.projection, grads.d_projection, state.first.d_projection,
                  state.second.d_projection, cfg, c1, c2);
        adam_step(params.bias, grads.d_bias, state.first.d_bias, state.second.d_bias, cfg, c1, c2);
    } else {
        momentum_step(params.embedding, grads.d_embedding, state.first.d_embedding, cfg);
        momentum_step(params.projection, grads.d_projection, state.first.d_projection, cfg);
        momentum_step(params.bias, grads.d_bias, state.first.d_bias, cfg);
    }
    params.embedding.row(kPadId).setZero();
}

}  // namespace sentpw
