#include "sentpw/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sentpw/errors.hpp"
#include "sentpw/parallel.hpp"

namespace sentpw {

LossKind parse_loss_kind(std::string_view name) {
    if (name == "contrastive") return LossKind::contrastive;
    if (name == "triplet") return LossKind::triplet;
    if (name == "multisim") return LossKind::multisim;
    throw ConfigError("unknown loss '" + std::string(name) +
                      "' (expected contrastive, triplet or multisim)");
}

std::string_view to_string(LossKind kind) {
    switch (kind) {
        case LossKind::contrastive: return "contrastive";
        case LossKind::triplet: return "triplet";
        case LossKind::multisim: return "multisim";
    }
    return "multisim";
}

void LossConfig::validate() const {
    if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
    if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
    if (!std::isfinite(lambda_ms) || !std::isfinite(lambda_c)) {
        throw ConfigError("lambda values must be finite");
    }
}

namespace {

LossReport empty_report(Eigen::Index m) {
    return {0.0, Matrix::Zero(m, m), Matrix::Zero(m, m)};
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// For exponents x_1..x_n returns log(1 + sum exp(x_k)) and writes
// exp(x_k) / (1 + sum exp(x)) into `share`, both with the largest exponent
// (including the implicit 0 of the "1 +") factored out.
double log1p_sum_exp(const std::vector<double>& x, std::vector<double>& share) {
    share.assign(x.size(), 0.0);
    if (x.empty()) return 0.0;
    double top = 0.0;
    for (double v : x) top = std::max(top, v);
    double total = std::exp(-top);
    for (std::size_t k = 0; k < x.size(); ++k) {
        share[k] = std::exp(x[k] - top);
        total += share[k];
    }
    for (double& s : share) s /= total;
    return top + std::log(total);
}

}  // namespace

LossReport contrastive_loss(const SimMatrix& sim, const LossConfig& cfg) {
    const Eigen::Index m = sim.size();
    LossReport r = empty_report(m);
    const std::size_t pairs = sim.positive_count() + sim.negative_count();
    if (pairs == 0) return r;
    const double inv = 1.0 / static_cast<double>(pairs);
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double s = sim.S(i, j);
            if (sim.pos(i, j)) {
                total -= s;
                r.dS(i, j) = -inv;
            } else if (sim.neg(i, j) && s > cfg.lambda_c) {
                total += s - cfg.lambda_c;
                r.dS(i, j) = inv;
            }
        }
    }
    r.loss = total * inv;
    r.W = r.dS.cwiseAbs();
    return r;
}

LossReport triplet_softmargin_loss(const SimMatrix& sim, const std::vector<Triplet>& triplets) {
    const Eigen::Index m = sim.size();
    LossReport r = empty_report(m);
    if (triplets.empty()) return r;
    const double inv = 1.0 / static_cast<double>(triplets.size());
    double total = 0.0;
    for (const Triplet& t : triplets) {
        if (t.anchor < 0 || t.anchor >= m || t.positive < 0 || t.positive >= m || t.negative < 0 ||
            t.negative >= m) {
            throw std::invalid_argument("triplet index outside the batch");
        }
        const int ya = sim.labels[static_cast<std::size_t>(t.anchor)];
        if (t.anchor == t.positive || ya != sim.labels[static_cast<std::size_t>(t.positive)] ||
            ya == sim.labels[static_cast<std::size_t>(t.negative)]) {
            throw std::invalid_argument("triplet requires y_a = y_p != y_n");
        }
        const double gap = sim.S(t.anchor, t.negative) - sim.S(t.anchor, t.positive);
        total += softplus(gap);
        const double w = logistic(gap) * inv;
        r.dS(t.anchor, t.negative) += w;
        r.dS(t.anchor, t.positive) -= w;
    }
    r.loss = total * inv;
    r.W = r.dS.cwiseAbs();
    return r;
}

LossReport multisim_loss(const SimMatrix& sim, const LossConfig& cfg, int threads) {
    cfg.validate();
    const Eigen::Index m = sim.size();
    LossReport r = empty_report(m);
    if (m == 0) return r;
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<double> anchor_loss(static_cast<std::size_t>(m), 0.0);

    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        std::vector<Eigen::Index> idx;
        std::vector<double> x;
        std::vector<double> share;

        idx.clear();
        x.clear();
        for (Eigen::Index k = 0; k < m; ++k) {
            if (!sim.pos(i, k)) continue;
            idx.push_back(k);
            x.push_back(-cfg.alpha * (sim.S(i, k) - cfg.lambda_ms));
        }
        double li = log1p_sum_exp(x, share) / cfg.alpha;
        for (std::size_t k = 0; k < idx.size(); ++k) r.dS(i, idx[k]) = -share[k] * inv_m;

        idx.clear();
        x.clear();
        for (Eigen::Index k = 0; k < m; ++k) {
            if (!sim.neg(i, k)) continue;
            idx.push_back(k);
            x.push_back(cfg.beta * (sim.S(i, k) - cfg.lambda_ms));
        }
        li += log1p_sum_exp(x, share) / cfg.beta;
        for (std::size_t k = 0; k < idx.size(); ++k) r.dS(i, idx[k]) = share[k] * inv_m;
        anchor_loss[ui] = li;
    });

    double total = 0.0;
    for (double v : anchor_loss) total += v;
    r.loss = total * inv_m;
    r.W = r.dS.cwiseAbs();
    return r;
}

Matrix ms_pair_weights(const SimMatrix& sim, const LossConfig& cfg) {
    cfg.validate();
    const Eigen::Index m = sim.size();
    const double a = cfg.alpha;
    const double b = cfg.beta;
    const double lam = cfg.lambda_ms;
    Matrix w = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (sim.neg(i, j)) {
                double denom = std::exp(b * (lam - sim.S(i, j)));
                for (Eigen::Index k = 0; k < m; ++k) {
                    if (sim.neg(i, k)) denom += std::exp(b * (sim.S(i, k) - sim.S(i, j)));
                }
                w(i, j) = 1.0 / denom;
            } else if (sim.pos(i, j)) {
                double denom = std::exp(-a * (lam - sim.S(i, j)));
                for (Eigen::Index k = 0; k < m; ++k) {
                    if (sim.pos(i, k)) denom += std::exp(-a * (sim.S(i, k) - sim.S(i, j)));
                }
                w(i, j) = 1.0 / denom;
            }
        }
    }
    return w;
}

Matrix extract_pair_weights(const LossReport& report, const SimMatrix& sim) {
    const Eigen::Index m = sim.size();
    if (report.dS.rows() != m || report.dS.cols() != m) {
        throw std::logic_error("loss report does not match the similarity matrix");
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double d = report.dS(i, j);
            auto where = [&] { return " at (" + std::to_string(i) + ", " + std::to_string(j) + ")"; };
            if (sim.neg(i, j)) {
                if (d < 0.0) throw std::logic_error("negative pair with dL/dS < 0" + where());
            } else if (sim.pos(i, j)) {
                if (d > 0.0) throw std::logic_error("positive pair with dL/dS > 0" + where());
            } else if (d != 0.0) {
                throw std::logic_error("non-zero dL/dS outside the pair masks" + where());
            }
        }
    }
    return report.dS.cwiseAbs();
}

}  // namespace sentpw
