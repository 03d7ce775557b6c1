#ifndef SENTPW_OPTIMIZER_HPP
#define SENTPW_OPTIMIZER_HPP

#include <string_view>

#include "sentpw/encoder.hpp"

namespace sentpw {

enum class OptimizerKind { sgd_momentum, adam };

OptimizerKind parse_optimizer_kind(std::string_view name);
std::string_view to_string(OptimizerKind kind);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::adam;
    double learning_rate = 1e-3;
    double momentum = 0.9;  // sgd_momentum only
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
};

// First/second moments shaped like the parameters. sgd_momentum uses only
// `first` (the velocity).
struct OptimizerState {
    Gradients first;
    Gradients second;
    long long updates = 0;

    static OptimizerState zeros_like(const EncoderParams& params);
};

// One in-place update. The PAD embedding row is left at zero.
void apply_update(EncoderParams& params, const Gradients& grads, OptimizerState& state,
                  const OptimizerConfig& cfg);

}  // namespace sentpw

#endif  // SENTPW_OPTIMIZER_HPP
