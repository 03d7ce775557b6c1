#include "sentpw/similarity.hpp"

#include <algorithm>
#include <stdexcept>

#include "sentpw/parallel.hpp"

namespace sentpw {

Matrix cosine_matrix(const Matrix& V, int threads) {
    const Eigen::Index m = V.rows();
    Matrix S(m, m);
    // Row i owns the upper triangle entries (i, j >= i); the mirror is filled
    // afterwards so no two workers touch the same entry.
    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        for (Eigen::Index j = i; j < m; ++j) {
            S(i, j) = std::clamp(V.row(i).dot(V.row(j)), -1.0, 1.0);
        }
    });
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) S(i, j) = S(j, i);
    }
    return S;
}

PairMasks pair_masks(const std::vector<int>& labels) {
    const auto m = static_cast<Eigen::Index>(labels.size());
    PairMasks masks{BoolMatrix::Constant(m, m, false), BoolMatrix::Constant(m, m, false)};
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (i == j) continue;
            const bool same = labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)];
            masks.pos(i, j) = same;
            masks.neg(i, j) = !same;
        }
    }
    return masks;
}

SimMatrix make_sim_matrix(const Matrix& V, const std::vector<int>& labels,
                          const std::vector<bool>& excluded, int threads) {
    if (static_cast<std::size_t>(V.rows()) != labels.size()) {
        throw std::invalid_argument("one label per embedding row required");
    }
    SimMatrix sim;
    sim.S = cosine_matrix(V, threads);
    auto masks = pair_masks(labels);
    for (std::size_t r = 0; r < excluded.size(); ++r) {
        if (!excluded[r]) continue;
        const auto i = static_cast<Eigen::Index>(r);
        masks.pos.row(i).setConstant(false);
        masks.pos.col(i).setConstant(false);
        masks.neg.row(i).setConstant(false);
        masks.neg.col(i).setConstant(false);
    }
    sim.pos = std::move(masks.pos);
    sim.neg = std::move(masks.neg);
    sim.labels = labels;
    return sim;
}

SimMatrix with_masks(const SimMatrix& sim, BoolMatrix pos, BoolMatrix neg) {
    SimMatrix out;
    out.S = sim.S;
    out.pos = std::move(pos);
    out.neg = std::move(neg);
    out.labels = sim.labels;
    return out;
}

}  // namespace sentpw
