#ifndef SENTPW_TRAINER_HPP
#define SENTPW_TRAINER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sentpw/dataset.hpp"
#include "sentpw/encoder.hpp"
#include "sentpw/losses.hpp"
#include "sentpw/mining.hpp"
#include "sentpw/optimizer.hpp"
#include "sentpw/similarity.hpp"
#include "sentpw/vocabulary.hpp"

namespace sentpw {

struct TrainConfig {
    LossKind loss = LossKind::multisim;
    OptimizerConfig optimizer;
    int epochs = 1;
    int steps_per_epoch = 100;
    std::uint64_t seed = 1;
    LossConfig loss_cfg;
    MiningConfig mining;
    bool filter = true;  // informative-pair filter before the loss
    std::size_t d_in = 64;
    std::size_t d_out = 32;
    int threads = 1;

    void validate() const;
    // Resolved settings as ordered key/value pairs (the config-file keys).
    std::vector<std::pair<std::string, std::string>> describe() const;
};

// Default filter setting for a loss: on for multisim, off for the baselines.
bool default_filter(LossKind loss);

struct StepMetrics {
    long long step = 0;
    double loss = 0.0;
    double kept_fraction = 1.0;
    double mean_pos_sim = 0.0;
    double mean_neg_sim = 0.0;
};

// Explicit pair structure for batches drawn from pair or triplet files. When
// given, these masks replace the label-derived ones.
struct ExplicitPairs {
    PairMasks masks;
    std::vector<Triplet> triplets;
};

struct TrainState {
    EncoderParams params;
    OptimizerState optimizer;
    long long step = 0;
    Rng rng;
    StepMetrics last;
};

TrainState make_train_state(EncoderParams params, std::uint64_t seed);

// Loss and parameter gradients of one batch without touching parameters.
struct BatchObjective {
    StepMetrics metrics;
    Gradients grads;
    Matrix dL_dV;
    SimMatrix sim;
};

BatchObjective evaluate_batch(const EncoderParams& params, const TokenBatch& batch,
                              const TrainConfig& cfg, const ExplicitPairs* explicit_pairs = nullptr);

// forward -> S -> optional filter -> loss -> dL/dV = (dS + dS^T) V ->
// backward -> optimizer update. Throws TrainingError on a non-finite loss or
// gradient, ConfigError on an empty batch.
StepMetrics train_step(TrainState& state, const TokenBatch& batch, const TrainConfig& cfg,
                       const ExplicitPairs* explicit_pairs = nullptr);

// Encoded training data. Classes corpora are batched with P x K sampling;
// pair and triplet records are batched as explicit structures of P*K rows.
struct TrainingSet {
    DatasetKind kind = DatasetKind::classes;
    EncodedCorpus corpus;                              // classes
    std::vector<std::vector<TokenId>> records;         // pairs/triplets, flattened rows
    std::vector<int> pair_labels;                      // pairs only
    std::size_t arity = 1;                             // rows per record

    std::size_t record_count() const {
        return kind == DatasetKind::classes ? corpus.size() : records.size() / arity;
    }
};

// Pairs feed contrastive directly; for the other losses they are collapsed to
// classes with pairs_to_classes. Triplet files are used as explicit triplets.
TrainingSet make_training_set(const Dataset& dataset, const Vocabulary& vocab, LossKind loss);

// Draws the next batch for `set`, advancing `rng`. For pair/triplet sets the
// explicit structure is written to `explicit_pairs`.
TokenBatch next_batch(const TrainingSet& set, const TrainConfig& cfg, Rng& rng,
                      std::optional<ExplicitPairs>& explicit_pairs);

std::string format_metrics(const StepMetrics& m);

struct FitResult {
    TrainState state;
    std::vector<StepMetrics> log;
};

// Runs epochs * steps_per_epoch steps from init_params(vocab, d_in, d_out,
// seed). Each step's metrics line is written to `metrics_log` if given.
FitResult fit(const TrainConfig& cfg, const Vocabulary& vocab, const TrainingSet& data,
              std::ostream* metrics_log = nullptr, const PretrainedTable* pretrained = nullptr);

}  // namespace sentpw

#endif  // SENTPW_TRAINER_HPP
