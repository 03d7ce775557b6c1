#include "sentpw/encoder.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sentpw/errors.hpp"
#include "sentpw/parallel.hpp"
#include "sentpw/tsv.hpp"

namespace sentpw {

EncoderParams init_params(const Vocabulary& vocab, std::size_t d_in, std::size_t d_out,
                          std::uint64_t seed, const PretrainedTable* pretrained) {
    if (d_in < 1 || d_out < 1) throw ConfigError("encoder dimensions must be >= 1");
    const auto n = static_cast<Eigen::Index>(vocab.size());
    const auto din = static_cast<Eigen::Index>(d_in);
    const auto dout = static_cast<Eigen::Index>(d_out);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> token_init(-0.05, 0.05);
    EncoderParams p;
    p.embedding = Matrix::Zero(n, din);
    for (Eigen::Index id = 0; id < n; ++id) {
        if (id == kPadId) continue;
        const std::string& token = vocab.token(static_cast<TokenId>(id));
        if (pretrained) {
            if (auto it = pretrained->find(token); it != pretrained->end()) {
                if (it->second.size() != d_in) {
                    throw ConfigError("pretrained vector for '" + token + "' has dimension " +
                                      std::to_string(it->second.size()) + ", expected " +
                                      std::to_string(d_in));
                }
                for (Eigen::Index c = 0; c < din; ++c) p.embedding(id, c) = it->second[c];
                continue;
            }
        }
        for (Eigen::Index c = 0; c < din; ++c) p.embedding(id, c) = token_init(rng);
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(d_in));
    std::uniform_real_distribution<double> proj_init(-bound, bound);
    p.projection.resize(din, dout);
    for (Eigen::Index r = 0; r < din; ++r) {
        for (Eigen::Index c = 0; c < dout; ++c) p.projection(r, c) = proj_init(rng);
    }
    p.bias = Vector::Zero(dout);
    return p;
}

PretrainedTable load_pretrained(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    PretrainedTable table;
    std::istringstream in(content);
    std::string line;
    std::size_t row = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++row;
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue;
        std::vector<double> values;
        std::string v;
        while (fields >> v) values.push_back(parse_double_field(v, "vector component", row));
        if (values.empty()) throw DataError("token without vector", row);
        if (dim == 0) dim = values.size();
        if (values.size() != dim) throw DataError("inconsistent vector dimension", row);
        table.emplace(std::move(token), std::move(values));
    }
    return table;
}

bool TokenBatch::degenerate(std::size_t row) const {
    for (std::size_t t = 0; t < lengths[row]; ++t) {
        if (at(row, t) != kPadId) return false;
    }
    return true;
}

TokenBatch TokenBatch::from_sequences(const std::vector<std::vector<TokenId>>& sequences,
                                      std::vector<int> labels) {
    if (labels.size() != sequences.size()) {
        throw std::invalid_argument("one label per sequence required");
    }
    TokenBatch b;
    for (const auto& s : sequences) b.max_len = std::max(b.max_len, s.size());
    b.ids.assign(sequences.size() * b.max_len, kPadId);
    for (std::size_t r = 0; r < sequences.size(); ++r) {
        std::copy(sequences[r].begin(), sequences[r].end(), b.ids.begin() + r * b.max_len);
        b.lengths.push_back(sequences[r].size());
    }
    b.labels = std::move(labels);
    return b;
}

Gradients Gradients::zeros_like(const EncoderParams& params) {
    return {Matrix::Zero(params.embedding.rows(), params.embedding.cols()),
            Matrix::Zero(params.projection.rows(), params.projection.cols()),
            Vector::Zero(params.bias.size())};
}

bool Gradients::all_finite() const {
    return d_embedding.allFinite() && d_projection.allFinite() && d_bias.allFinite();
}

EncoderOutput embed_batch(const EncoderParams& params, const TokenBatch& batch, int threads) {
    const std::size_t m = batch.rows();
    const auto din = params.embedding.cols();
    const auto dout = params.projection.cols();
    const auto vocab = static_cast<TokenId>(params.embedding.rows());
    for (TokenId id : batch.ids) {
        if (id < 0 || id >= vocab) {
            throw std::out_of_range("token id " + std::to_string(id) + " outside vocabulary of " +
                                    std::to_string(vocab));
        }
    }

    EncoderOutput out;
    ForwardCache& c = out.cache;
    c.batch = batch;
    c.means = Matrix::Zero(static_cast<Eigen::Index>(m), din);
    c.projected = Matrix::Zero(static_cast<Eigen::Index>(m), dout);
    c.norms = Vector::Zero(static_cast<Eigen::Index>(m));
    c.counts.assign(m, 0);
    c.degenerate.assign(m, false);
    out.embeddings = Matrix::Zero(static_cast<Eigen::Index>(m), dout);

    // std::vector<bool> is not safe for concurrent writes to different
    // elements, so the flags are staged as chars.
    std::vector<char> degenerate(m, 0);
    parallel_for(m, threads, [&](std::size_t i) {
        const auto row = static_cast<Eigen::Index>(i);
        std::size_t count = 0;
        for (std::size_t t = 0; t < batch.lengths[i]; ++t) {
            const TokenId id = batch.at(i, t);
            if (id == kPadId) continue;
            c.means.row(row) += params.embedding.row(id);
            ++count;
        }
        c.counts[i] = count;
        if (count == 0) {
            degenerate[i] = 1;
            return;
        }
        c.means.row(row) /= static_cast<double>(count);
        c.projected.row(row) = c.means.row(row) * params.projection + params.bias.transpose();
        const double norm = c.projected.row(row).norm();
        c.norms(row) = norm;
        out.embeddings.row(row) = c.projected.row(row) / (norm + kNormEpsilon);
    });
    for (std::size_t i = 0; i < m; ++i) c.degenerate[i] = degenerate[i] != 0;
    return out;
}

Gradients backward_batch(const EncoderParams& params, const ForwardCache& cache,
                         const Matrix& dL_dV) {
    const auto m = static_cast<Eigen::Index>(cache.batch.rows());
    if (dL_dV.rows() != m || dL_dV.cols() != params.projection.cols()) {
        throw std::invalid_argument("dL/dV shape does not match the forward batch");
    }
    Gradients g = Gradients::zeros_like(params);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto row = static_cast<std::size_t>(i);
        if (cache.degenerate[row]) continue;
        const double norm = cache.norms(i);
        const double denom = norm + kNormEpsilon;
        const Eigen::RowVectorXd gv = dL_dV.row(i);
        const Eigen::RowVectorXd u = cache.projected.row(i);
        // d(u / (|u| + eps)) = du / (|u| + eps) - u (u . du) / (|u| (|u| + eps)^2)
        Eigen::RowVectorXd du = gv / denom;
        if (norm > 0.0) du -= u * (u.dot(gv) / (norm * denom * denom));

        g.d_bias += du.transpose();
        g.d_projection += cache.means.row(i).transpose() * du;
        const Eigen::RowVectorXd d_mean = du * params.projection.transpose();
        const double inv_count = 1.0 / static_cast<double>(cache.counts[row]);
        for (std::size_t t = 0; t < cache.batch.lengths[row]; ++t) {
            const TokenId id = cache.batch.at(row, t);
            if (id == kPadId) continue;
            g.d_embedding.row(id) += d_mean * inv_count;
        }
    }
    g.d_embedding.row(kPadId).setZero();
    return g;
}

Matrix embed_sequences(const EncoderParams& params,
                       const std::vector<std::vector<TokenId>>& sequences, int threads) {
    constexpr std::size_t kChunk = 512;
    Matrix out(static_cast<Eigen::Index>(sequences.size()), params.projection.cols());
    for (std::size_t start = 0; start < sequences.size(); start += kChunk) {
        const std::size_t end = std::min(sequences.size(), start + kChunk);
        std::vector<std::vector<TokenId>> chunk(sequences.begin() + start, sequences.begin() + end);
        const auto batch = TokenBatch::from_sequences(chunk, std::vector<int>(chunk.size(), 0));
        const auto result = embed_batch(params, batch, threads);
        out.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(end - start)) =
            result.embeddings;
    }
    return out;
}

}  // namespace sentpw
