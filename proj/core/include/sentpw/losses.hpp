#ifndef SENTPW_LOSSES_HPP
#define SENTPW_LOSSES_HPP

#include <string_view>
#include <vector>

#include "sentpw/linalg.hpp"
#include "sentpw/similarity.hpp"

namespace sentpw {

enum class LossKind { contrastive, triplet, multisim };

LossKind parse_loss_kind(std::string_view name);
std::string_view to_string(LossKind kind);

// alpha/beta/lambda_ms parameterize the multi-similarity loss, lambda_c is the
// contrastive margin.
struct LossConfig {
    double alpha = 2.0;
    double beta = 50.0;
    double lambda_ms = 0.5;
    double lambda_c = 0.5;

    // Throws ConfigError unless alpha > 0 and beta > 0.
    void validate() const;
};

// dS holds dL/dS_ij treating every entry of S as an independent variable.
// W = |dS| is the pair weight each loss implicitly assigns.
struct LossReport {
    double loss = 0.0;
    Matrix dS;
    Matrix W;
};

struct Triplet {
    Eigen::Index anchor = 0;
    Eigen::Index positive = 0;
    Eigen::Index negative = 0;

    bool operator==(const Triplet&) const = default;
};

// Mean over masked ordered pairs of (1 - I)[S - lambda_c]_+ - I S.
LossReport contrastive_loss(const SimMatrix& sim, const LossConfig& cfg);

// Mean over triplets of log(1 + exp(S_an - S_ap)). Throws
// std::invalid_argument if a triplet does not have y_a = y_p != y_n.
LossReport triplet_softmargin_loss(const SimMatrix& sim, const std::vector<Triplet>& triplets);

// Multi-similarity loss, averaged over the m anchors:
//   1/alpha log(1 + sum_P exp(-alpha (S_ik - lambda))) + 1/beta log(1 + sum_N exp(beta (S_ik - lambda)))
// Both log-sum-exp terms are evaluated with the max exponent factored out.
// Anchor rows are independent; `threads` splits them across workers.
LossReport multisim_loss(const SimMatrix& sim, const LossConfig& cfg, int threads = 1);

// Closed-form locality weights, evaluated literally:
//   negative: 1 / (exp(beta (lambda - S_ij)) + sum_{k in N_i} exp(beta (S_ik - S_ij)))
//   positive: 1 / (exp(-alpha (lambda - S_ij)) + sum_{k in P_i} exp(-alpha (S_ik - S_ij)))
// Equals m |dL_MS/dS_ij|.
Matrix ms_pair_weights(const SimMatrix& sim, const LossConfig& cfg);

// |dS| after checking the sign convention: dS >= 0 on negative pairs, <= 0 on
// positive pairs and exactly 0 elsewhere. Throws std::logic_error otherwise.
Matrix extract_pair_weights(const LossReport& report, const SimMatrix& sim);

}  // namespace sentpw

#endif  // SENTPW_LOSSES_HPP
