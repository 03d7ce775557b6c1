#ifndef SENTPW_MINING_HPP
#define SENTPW_MINING_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string_view>
#include <vector>

#include "sentpw/encoder.hpp"
#include "sentpw/losses.hpp"
#include "sentpw/similarity.hpp"

namespace sentpw {

using Rng = std::mt19937_64;

enum class HardMode { semi_hard, hardest };

HardMode parse_hard_mode(std::string_view name);
std::string_view to_string(HardMode mode);

struct MiningConfig {
    double epsilon = 0.1;
    int classes_per_batch = 8;   // P
    int samples_per_class = 4;   // K
    HardMode hard_mode = HardMode::hardest;

    // Throws ConfigError unless epsilon >= 0, P >= 2, K >= 1.
    void validate() const;
};

struct FilterResult {
    BoolMatrix keep_pos;
    BoolMatrix keep_neg;
    std::size_t kept = 0;
    std::size_t total = 0;
    double kept_fraction = 1.0;  // kept / total, 1 when there are no pairs
};

// Keeps the pairs whose neighbourhood is not yet well separated:
//   negative (i,j): S_ij > min_{k in P_i} S_ik - epsilon
//   positive (i,j): S_ij < max_{k in N_i} S_ik + epsilon
// Both inequalities are strict. An anchor without positives keeps all of its
// negatives; an anchor without negatives keeps all of its positives.
FilterResult informative_pair_filter(const SimMatrix& sim, const MiningConfig& cfg);

struct HardMineResult {
    std::vector<Triplet> triplets;
    std::size_t skipped = 0;  // anchors lacking a positive or a negative
};

// One triplet per anchor. hardest: (argmin_P S, argmax_N S). semi_hard: the
// same positive with the most similar negative below S_ap, falling back to the
// hardest negative. Ties go to the lowest index.
HardMineResult hard_mine(const SimMatrix& sim, const MiningConfig& cfg);

// Token sequences and labels of a classes dataset, ready for batching.
struct EncodedCorpus {
    std::vector<std::vector<TokenId>> sequences;
    std::vector<int> labels;
    std::map<int, std::vector<std::size_t>> groups;  // label -> indices

    std::size_t size() const { return sequences.size(); }
};

EncodedCorpus encode_corpus(const std::vector<std::vector<TokenId>>& sequences,
                            const std::vector<int>& labels);

// P distinct classes, K rows each, in draw order. Classes are chosen by a
// partial Fisher-Yates shuffle of the sorted class list; within a class, K
// indices are drawn without replacement when the class has >= K members and
// with replacement otherwise. Throws ConfigError with fewer than P classes.
std::vector<std::size_t> sample_pk_indices(const std::map<int, std::vector<std::size_t>>& groups,
                                           const MiningConfig& cfg, Rng& rng);

TokenBatch sample_pk_batch(const EncodedCorpus& corpus, const MiningConfig& cfg, Rng& rng);

}  // namespace sentpw

#endif  // SENTPW_MINING_HPP
