#ifndef SENTPW_SYNTHETIC_HPP
#define SENTPW_SYNTHETIC_HPP

#include <cstdint>

#include "sentpw/dataset.hpp"

namespace sentpw {

// Templated toy corpus: each class has a fixed template of `template_len`
// distinct tokens drawn from `vocab` words "w0".."w<vocab-1>"; every sample
// replaces `perturbed` distinct template positions with random words.
struct SyntheticConfig {
    int classes = 20;
    int per_class = 50;
    int template_len = 8;
    int perturbed = 2;
    int vocab = 500;
    std::uint64_t seed = 7;
};

// Whitespace-tokenized classes dataset, grouped by class in id order.
Dataset make_synthetic_corpus(const SyntheticConfig& cfg);

struct HeldOutSplit {
    Dataset train;
    Dataset held_out;
};

// The last `held_out_per_class` records of every class go to held_out.
HeldOutSplit split_held_out(const Dataset& classes, std::size_t held_out_per_class);

// Random (anchor, positive, negative) triplets over a classes dataset; anchor
// and positive are distinct records of one class.
Dataset sample_triplets(const Dataset& classes, std::size_t count, std::uint64_t seed);

// Random pairs, alternating positive and negative.
Dataset sample_pairs(const Dataset& classes, std::size_t count, std::uint64_t seed);

// Tab-separated rendering in the load_dataset format.
std::string to_tsv(const Dataset& ds);

}  // namespace sentpw

#endif  // SENTPW_SYNTHETIC_HPP
