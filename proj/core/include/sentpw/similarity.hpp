#ifndef SENTPW_SIMILARITY_HPP
#define SENTPW_SIMILARITY_HPP

#include <vector>

#include "sentpw/linalg.hpp"

namespace sentpw {

struct PairMasks {
    BoolMatrix pos;  // y_i == y_j, i != j
    BoolMatrix neg;  // y_i != y_j
};

// Batch similarity matrix with the pair masks used by every loss.
struct SimMatrix {
    Matrix S;
    BoolMatrix pos;
    BoolMatrix neg;
    std::vector<int> labels;

    Eigen::Index size() const { return S.rows(); }
    std::size_t positive_count() const { return static_cast<std::size_t>(pos.count()); }
    std::size_t negative_count() const { return static_cast<std::size_t>(neg.count()); }
};

// S = V V^T evaluated once per unordered pair and mirrored, clamped to [-1, 1].
Matrix cosine_matrix(const Matrix& V, int threads = 1);

PairMasks pair_masks(const std::vector<int>& labels);

// Builds S and masks; rows flagged in `excluded` (degenerate embeddings) take
// part in no pair.
SimMatrix make_sim_matrix(const Matrix& V, const std::vector<int>& labels,
                          const std::vector<bool>& excluded = {}, int threads = 1);

// Same S and labels with the masks replaced.
SimMatrix with_masks(const SimMatrix& sim, BoolMatrix pos, BoolMatrix neg);

}  // namespace sentpw

#endif  // SENTPW_SIMILARITY_HPP
