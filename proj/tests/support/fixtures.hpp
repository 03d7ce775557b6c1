// Small vocabularies, parameters and batches shared by the trainer tests.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "sentpw/encoder.hpp"
#include "sentpw/vocabulary.hpp"

namespace sentpw::testing {

inline Vocabulary letter_vocab(int letters) {
    std::vector<std::string> tokens{std::string(kPadToken), std::string(kUnkToken)};
    for (int i = 0; i < letters; ++i) tokens.push_back("t" + std::to_string(i));
    return Vocabulary::from_tokens(tokens);
}

// `classes` classes of `per_class` rows; every row is 1..max_len random non-PAD
// ids followed by nothing (from_sequences pads).
inline TokenBatch random_batch(std::mt19937_64& rng, const Vocabulary& vocab, int classes,
                               int per_class, int max_len = 4) {
    std::uniform_int_distribution<TokenId> id(1, static_cast<TokenId>(vocab.size()) - 1);
    std::uniform_int_distribution<int> len(1, max_len);
    std::vector<std::vector<TokenId>> seqs;
    std::vector<int> labels;
    for (int c = 0; c < classes; ++c) {
        for (int k = 0; k < per_class; ++k) {
            std::vector<TokenId> s(static_cast<std::size_t>(len(rng)));
            for (auto& t : s) t = id(rng);
            seqs.push_back(std::move(s));
            labels.push_back(c);
        }
    }
    return TokenBatch::from_sequences(seqs, labels);
}

}  // namespace sentpw::testing
