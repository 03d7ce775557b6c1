#ifndef SENTPW_ENCODER_HPP
#define SENTPW_ENCODER_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "sentpw/linalg.hpp"
#include "sentpw/vocabulary.hpp"

namespace sentpw {

// Mean-pooling sentence encoder:
//   v_i = normalize(P^T mean_{t in row i, t != PAD} E[t] + b)
// with normalize(u) = u / (|u| + kNormEpsilon). All trainable state lives here.
struct EncoderParams {
    Matrix embedding;   // vocab_size x d_in; row kPadId stays zero
    Matrix projection;  // d_in x d_out
    Vector bias;        // d_out

    std::size_t vocab_size() const { return static_cast<std::size_t>(embedding.rows()); }
    std::size_t d_in() const { return static_cast<std::size_t>(embedding.cols()); }
    std::size_t d_out() const { return static_cast<std::size_t>(projection.cols()); }

    bool operator==(const EncoderParams& o) const {
        return embedding.rows() == o.embedding.rows() && embedding.cols() == o.embedding.cols() &&
               projection.rows() == o.projection.rows() &&
               projection.cols() == o.projection.cols() && bias.size() == o.bias.size() &&
               embedding == o.embedding && projection == o.projection && bias == o.bias;
    }
};

inline constexpr double kNormEpsilon = 1e-12;

using PretrainedTable = std::unordered_map<std::string, std::vector<double>>;

// E rows come from `pretrained` where the token matches, otherwise
// U[-0.05, 0.05); P ~ U[-1/sqrt(d_in), 1/sqrt(d_in)); b = 0; PAD row = 0.
// Random draws happen in id order for E, then row-major for P, all from one
// mt19937_64 seeded with `seed`. Throws ConfigError on bad dimensions.
EncoderParams init_params(const Vocabulary& vocab, std::size_t d_in, std::size_t d_out,
                          std::uint64_t seed, const PretrainedTable* pretrained = nullptr);

// GloVe-style text file: `token v1 v2 ... vd` per line.
PretrainedTable load_pretrained(const std::filesystem::path& path);

// Padded token ids with per-row lengths and class labels.
struct TokenBatch {
    std::size_t max_len = 0;
    std::vector<TokenId> ids;  // rows() * max_len, row-major, PAD filled
    std::vector<std::size_t> lengths;
    std::vector<int> labels;

    std::size_t rows() const { return lengths.size(); }
    TokenId at(std::size_t row, std::size_t pos) const { return ids[row * max_len + pos]; }
    // True when the row has no non-PAD token.
    bool degenerate(std::size_t row) const;

    static TokenBatch from_sequences(const std::vector<std::vector<TokenId>>& sequences,
                                     std::vector<int> labels);
};

struct ForwardCache {
    TokenBatch batch;
    Matrix means;      // m x d_in, pooled embeddings
    Matrix projected;  // m x d_out, pre-normalization
    Vector norms;      // |projected row|
    std::vector<std::size_t> counts;  // non-PAD tokens per row
    std::vector<bool> degenerate;
};

struct EncoderOutput {
    Matrix embeddings;  // m x d_out, unit rows, zero for degenerate rows
    ForwardCache cache;
};

struct Gradients {
    Matrix d_embedding;
    Matrix d_projection;
    Vector d_bias;

    static Gradients zeros_like(const EncoderParams& params);
    bool all_finite() const;
};

// Throws std::out_of_range for ids outside the vocabulary.
EncoderOutput embed_batch(const EncoderParams& params, const TokenBatch& batch, int threads = 1);

// Exact gradients of a scalar loss through normalization, projection and mean
// pooling given dL/dV. The PAD row and degenerate rows receive zero gradient.
// Throws std::invalid_argument when dL_dV does not match the cached shape.
Gradients backward_batch(const EncoderParams& params, const ForwardCache& cache, const Matrix& dL_dV);

// Embeds id sequences in chunks; convenience for evaluation.
Matrix embed_sequences(const EncoderParams& params,
                       const std::vector<std::vector<TokenId>>& sequences, int threads = 1);

}  // namespace sentpw

#endif  // SENTPW_ENCODER_HPP
