#include "sentpw/mining.hpp"

#include <limits>
#include <numeric>

#include "sentpw/errors.hpp"

namespace sentpw {

HardMode parse_hard_mode(std::string_view name) {
    if (name == "hardest") return HardMode::hardest;
    if (name == "semi_hard") return HardMode::semi_hard;
    throw ConfigError("unknown hard mining mode '" + std::string(name) +
                      "' (expected hardest or semi_hard)");
}

std::string_view to_string(HardMode mode) {
    return mode == HardMode::hardest ? "hardest" : "semi_hard";
}

void MiningConfig::validate() const {
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
    if (classes_per_batch < 2) throw ConfigError("classes per batch (P) must be >= 2");
    if (samples_per_class < 1) throw ConfigError("samples per class (K) must be >= 1");
}

FilterResult informative_pair_filter(const SimMatrix& sim, const MiningConfig& cfg) {
    const Eigen::Index m = sim.size();
    FilterResult f;
    f.keep_pos = BoolMatrix::Constant(m, m, false);
    f.keep_neg = BoolMatrix::Constant(m, m, false);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
        double min_pos = kInf;
        double max_neg = -kInf;
        bool has_pos = false;
        bool has_neg = false;
        for (Eigen::Index k = 0; k < m; ++k) {
            if (sim.pos(i, k)) {
                has_pos = true;
                min_pos = std::min(min_pos, sim.S(i, k));
            } else if (sim.neg(i, k)) {
                has_neg = true;
                max_neg = std::max(max_neg, sim.S(i, k));
            }
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            if (sim.neg(i, j)) {
                ++f.total;
                const bool keep = !has_pos || sim.S(i, j) > min_pos - cfg.epsilon;
                f.keep_neg(i, j) = keep;
                f.kept += keep;
            } else if (sim.pos(i, j)) {
                ++f.total;
                const bool keep = !has_neg || sim.S(i, j) < max_neg + cfg.epsilon;
                f.keep_pos(i, j) = keep;
                f.kept += keep;
            }
        }
    }
    f.kept_fraction = f.total == 0 ? 1.0 : static_cast<double>(f.kept) / static_cast<double>(f.total);
    return f;
}

HardMineResult hard_mine(const SimMatrix& sim, const MiningConfig& cfg) {
    const Eigen::Index m = sim.size();
    HardMineResult out;
    for (Eigen::Index a = 0; a < m; ++a) {
        Eigen::Index p = -1;
        Eigen::Index n = -1;
        for (Eigen::Index k = 0; k < m; ++k) {
            if (sim.pos(a, k) && (p < 0 || sim.S(a, k) < sim.S(a, p))) p = k;
            if (sim.neg(a, k) && (n < 0 || sim.S(a, k) > sim.S(a, n))) n = k;
        }
        if (p < 0 || n < 0) {
            ++out.skipped;
            continue;
        }
        if (cfg.hard_mode == HardMode::semi_hard) {
            Eigen::Index semi = -1;
            for (Eigen::Index k = 0; k < m; ++k) {
                if (!sim.neg(a, k) || !(sim.S(a, k) < sim.S(a, p))) continue;
                if (semi < 0 || sim.S(a, k) > sim.S(a, semi)) semi = k;
            }
            if (semi >= 0) n = semi;
        }
        out.triplets.push_back({a, p, n});
    }
    return out;
}

EncodedCorpus encode_corpus(const std::vector<std::vector<TokenId>>& sequences,
                            const std::vector<int>& labels) {
    if (sequences.size() != labels.size()) {
        throw std::invalid_argument("one label per sequence required");
    }
    EncodedCorpus c;
    c.sequences = sequences;
    c.labels = labels;
    for (std::size_t i = 0; i < labels.size(); ++i) c.groups[labels[i]].push_back(i);
    return c;
}

std::vector<std::size_t> sample_pk_indices(const std::map<int, std::vector<std::size_t>>& groups,
                                           const MiningConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<const std::vector<std::size_t>*> classes;
    for (const auto& [label, members] : groups) {
        if (!members.empty()) classes.push_back(&members);
    }
    const auto P = static_cast<std::size_t>(cfg.classes_per_batch);
    const auto K = static_cast<std::size_t>(cfg.samples_per_class);
    if (classes.size() < P) {
        throw ConfigError("need at least " + std::to_string(P) + " classes per batch, dataset has " +
                          std::to_string(classes.size()));
    }
    for (std::size_t c = 0; c < P; ++c) {
        std::uniform_int_distribution<std::size_t> pick(c, classes.size() - 1);
        std::swap(classes[c], classes[pick(rng)]);
    }
    std::vector<std::size_t> rows;
    rows.reserve(P * K);
    for (std::size_t c = 0; c < P; ++c) {
        std::vector<std::size_t> members = *classes[c];
        if (members.size() >= K) {
            for (std::size_t k = 0; k < K; ++k) {
                std::uniform_int_distribution<std::size_t> pick(k, members.size() - 1);
                std::swap(members[k], members[pick(rng)]);
                rows.push_back(members[k]);
            }
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
            for (std::size_t k = 0; k < K; ++k) rows.push_back(members[pick(rng)]);
        }
    }
    return rows;
}

TokenBatch sample_pk_batch(const EncodedCorpus& corpus, const MiningConfig& cfg, Rng& rng) {
    const auto rows = sample_pk_indices(corpus.groups, cfg, rng);
    std::vector<std::vector<TokenId>> seqs;
    std::vector<int> labels;
    seqs.reserve(rows.size());
    labels.reserve(rows.size());
    for (std::size_t r : rows) {
        seqs.push_back(corpus.sequences[r]);
        labels.push_back(corpus.labels[r]);
    }
    return TokenBatch::from_sequences(seqs, std::move(labels));
}

}  // namespace sentpw
