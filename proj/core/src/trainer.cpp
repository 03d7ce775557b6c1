#include "sentpw/trainer.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "sentpw/errors.hpp"
#include "sentpw/numfmt.hpp"

namespace sentpw {

void TrainConfig::validate() const {
    optimizer.validate();
    loss_cfg.validate();
    mining.validate();
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (steps_per_epoch < 1) throw ConfigError("steps per epoch must be >= 1");
    if (d_in < 1 || d_out < 1) throw ConfigError("encoder dimensions must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
}

std::vector<std::pair<std::string, std::string>> TrainConfig::describe() const {
    return {
        {"loss", std::string(to_string(loss))},
        {"optimizer", std::string(to_string(optimizer.kind))},
        {"lr", format_double(optimizer.learning_rate)},
        {"momentum", format_double(optimizer.momentum)},
        {"beta1", format_double(optimizer.beta1)},
        {"beta2", format_double(optimizer.beta2)},
        {"adam-eps", format_double(optimizer.eps)},
        {"epochs", std::to_string(epochs)},
        {"steps", std::to_string(steps_per_epoch)},
        {"seed", std::to_string(seed)},
        {"alpha", format_double(loss_cfg.alpha)},
        {"beta", format_double(loss_cfg.beta)},
        {"lambda", format_double(loss_cfg.lambda_ms)},
        {"margin", format_double(loss_cfg.lambda_c)},
        {"epsilon", format_double(mining.epsilon)},
        {"classes-per-batch", std::to_string(mining.classes_per_batch)},
        {"samples-per-class", std::to_string(mining.samples_per_class)},
        {"hard-mode", std::string(to_string(mining.hard_mode))},
        {"filter", filter ? "on" : "off"},
        {"d-in", std::to_string(d_in)},
        {"d-out", std::to_string(d_out)},
    };
}

bool default_filter(LossKind loss) { return loss == LossKind::multisim; }

TrainState make_train_state(EncoderParams params, std::uint64_t seed) {
    TrainState st;
    st.optimizer = OptimizerState::zeros_like(params);
    st.params = std::move(params);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x5eedU};
    st.rng.seed(seq);
    return st;
}

namespace {

void clear_rows(BoolMatrix& mask, const std::vector<bool>& excluded) {
    for (std::size_t r = 0; r < excluded.size(); ++r) {
        if (!excluded[r]) continue;
        mask.row(static_cast<Eigen::Index>(r)).setConstant(false);
        mask.col(static_cast<Eigen::Index>(r)).setConstant(false);
    }
}

double masked_mean(const Matrix& S, const BoolMatrix& mask) {
    const auto n = mask.count();
    if (n == 0) return 0.0;
    return mask.select(S.array(), 0.0).sum() / static_cast<double>(n);
}

}  // namespace

BatchObjective evaluate_batch(const EncoderParams& params, const TokenBatch& batch,
                              const TrainConfig& cfg, const ExplicitPairs* explicit_pairs) {
    if (batch.rows() == 0) throw ConfigError("empty batch");
    cfg.loss_cfg.validate();
    const auto fwd = embed_batch(params, batch, cfg.threads);
    const auto& excluded = fwd.cache.degenerate;

    BatchObjective obj;
    obj.sim = make_sim_matrix(fwd.embeddings, batch.labels, excluded, cfg.threads);
    if (explicit_pairs) {
        const auto m = obj.sim.size();
        if (explicit_pairs->masks.pos.rows() != m || explicit_pairs->masks.neg.rows() != m) {
            throw std::invalid_argument("explicit masks do not match the batch");
        }
        obj.sim.pos = explicit_pairs->masks.pos;
        obj.sim.neg = explicit_pairs->masks.neg;
        clear_rows(obj.sim.pos, excluded);
        clear_rows(obj.sim.neg, excluded);
    }
    const SimMatrix& sim = obj.sim;

    StepMetrics& metrics = obj.metrics;
    metrics.mean_pos_sim = masked_mean(sim.S, sim.pos);
    metrics.mean_neg_sim = masked_mean(sim.S, sim.neg);
    FilterResult filtered = informative_pair_filter(sim, cfg.mining);
    metrics.kept_fraction = filtered.kept_fraction;
    const SimMatrix active =
        cfg.filter ? with_masks(sim, std::move(filtered.keep_pos), std::move(filtered.keep_neg)) : sim;

    LossReport report;
    switch (cfg.loss) {
        case LossKind::contrastive:
            report = contrastive_loss(active, cfg.loss_cfg);
            break;
        case LossKind::multisim:
            report = multisim_loss(active, cfg.loss_cfg, cfg.threads);
            break;
        case LossKind::triplet: {
            std::vector<Triplet> triplets;
            if (explicit_pairs && !explicit_pairs->triplets.empty()) {
                for (const Triplet& t : explicit_pairs->triplets) {
                    if (active.pos(t.anchor, t.positive) && active.neg(t.anchor, t.negative)) {
                        triplets.push_back(t);
                    }
                }
            } else {
                triplets = hard_mine(active, cfg.mining).triplets;
            }
            report = triplet_softmargin_loss(active, triplets);
            break;
        }
    }
    metrics.loss = report.loss;

    obj.dL_dV = (report.dS + report.dS.transpose()) * fwd.embeddings;
    obj.grads = backward_batch(params, fwd.cache, obj.dL_dV);
    if (!std::isfinite(report.loss) || !obj.grads.all_finite()) {
        std::ostringstream msg;
        msg << "non-finite " << (std::isfinite(report.loss) ? "gradient" : "loss")
            << "; S min=" << format_double(sim.S.size() ? sim.S.minCoeff() : 0.0)
            << " max=" << format_double(sim.S.size() ? sim.S.maxCoeff() : 0.0)
            << " loss=" << format_double(report.loss);
        throw TrainingError(msg.str());
    }
    return obj;
}

StepMetrics train_step(TrainState& state, const TokenBatch& batch, const TrainConfig& cfg,
                       const ExplicitPairs* explicit_pairs) {
    BatchObjective obj = evaluate_batch(state.params, batch, cfg, explicit_pairs);
    apply_update(state.params, obj.grads, state.optimizer, cfg.optimizer);
    ++state.step;
    obj.metrics.step = state.step;
    state.last = obj.metrics;
    return obj.metrics;
}

TrainingSet make_training_set(const Dataset& dataset, const Vocabulary& vocab, LossKind loss) {
    TrainingSet set;
    auto classes_from = [&](const Dataset& ds) {
        std::vector<std::vector<TokenId>> seqs;
        std::vector<int> labels;
        for (const auto& rec : ds.classes) {
            seqs.push_back(vocab.encode(rec.sentence.tokens));
            labels.push_back(rec.class_id);
        }
        set.kind = DatasetKind::classes;
        set.corpus = encode_corpus(seqs, labels);
    };
    switch (dataset.kind) {
        case DatasetKind::classes:
            classes_from(dataset);
            break;
        case DatasetKind::pairs:
            if (loss == LossKind::contrastive) {
                set.kind = DatasetKind::pairs;
                set.arity = 2;
                for (const auto& p : dataset.pairs) {
                    set.records.push_back(vocab.encode(p.first.tokens));
                    set.records.push_back(vocab.encode(p.second.tokens));
                    set.pair_labels.push_back(p.label);
                }
            } else {
                classes_from(pairs_to_classes(dataset));
            }
            break;
        case DatasetKind::triplets:
            set.kind = DatasetKind::triplets;
            set.arity = 3;
            for (const auto& t : dataset.triplets) {
                set.records.push_back(vocab.encode(t.anchor.tokens));
                set.records.push_back(vocab.encode(t.positive.tokens));
                set.records.push_back(vocab.encode(t.negative.tokens));
            }
            break;
    }
    if (set.record_count() == 0) throw DataError("training set is empty");
    return set;
}

TokenBatch next_batch(const TrainingSet& set, const TrainConfig& cfg, Rng& rng,
                      std::optional<ExplicitPairs>& explicit_pairs) {
    if (set.kind == DatasetKind::classes) {
        explicit_pairs.reset();
        return sample_pk_batch(set.corpus, cfg.mining, rng);
    }
    const std::size_t rows_wanted =
        static_cast<std::size_t>(cfg.mining.classes_per_batch) *
        static_cast<std::size_t>(cfg.mining.samples_per_class);
    const std::size_t available = set.record_count();
    const std::size_t n = std::min(available, std::max<std::size_t>(1, rows_wanted / set.arity));

    std::vector<std::size_t> chosen;
    std::unordered_set<std::size_t> seen;
    std::uniform_int_distribution<std::size_t> pick(0, available - 1);
    while (chosen.size() < n) {
        const std::size_t r = pick(rng);
        if (seen.insert(r).second) chosen.push_back(r);
    }

    const auto m = static_cast<Eigen::Index>(n * set.arity);
    ExplicitPairs ex{{BoolMatrix::Constant(m, m, false), BoolMatrix::Constant(m, m, false)}, {}};
    std::vector<std::vector<TokenId>> seqs;
    std::vector<int> labels;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t r = chosen[k];
        for (std::size_t j = 0; j < set.arity; ++j) seqs.push_back(set.records[r * set.arity + j]);
        const auto base = static_cast<Eigen::Index>(k * set.arity);
        const int same = static_cast<int>(2 * k);
        const int other = same + 1;
        if (set.kind == DatasetKind::pairs) {
            const bool positive = set.pair_labels[r] == 1;
            labels.push_back(same);
            labels.push_back(positive ? same : other);
            auto& mask = positive ? ex.masks.pos : ex.masks.neg;
            mask(base, base + 1) = mask(base + 1, base) = true;
        } else {
            labels.insert(labels.end(), {same, same, other});
            ex.masks.pos(base, base + 1) = ex.masks.pos(base + 1, base) = true;
            ex.masks.neg(base, base + 2) = ex.masks.neg(base + 2, base) = true;
            ex.triplets.push_back({base, base + 1, base + 2});
        }
    }
    explicit_pairs = std::move(ex);
    return TokenBatch::from_sequences(seqs, std::move(labels));
}

std::string format_metrics(const StepMetrics& m) {
    return std::to_string(m.step) + '\t' + format_double(m.loss) + '\t' +
           format_double(m.kept_fraction) + '\t' + format_double(m.mean_pos_sim) + '\t' +
           format_double(m.mean_neg_sim);
}

FitResult fit(const TrainConfig& cfg, const Vocabulary& vocab, const TrainingSet& data,
              std::ostream* metrics_log, const PretrainedTable* pretrained) {
    cfg.validate();
    FitResult result{make_train_state(init_params(vocab, cfg.d_in, cfg.d_out, cfg.seed, pretrained),
                                      cfg.seed),
                     {}};
    std::optional<ExplicitPairs> explicit_pairs;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int s = 0; s < cfg.steps_per_epoch; ++s) {
            const TokenBatch batch = next_batch(data, cfg, result.state.rng, explicit_pairs);
            const StepMetrics m = train_step(result.state, batch, cfg,
                                             explicit_pairs ? &*explicit_pairs : nullptr);
            result.log.push_back(m);
            if (metrics_log) *metrics_log << format_metrics(m) << '\n';
        }
    }
    return result;
}

}  // namespace sentpw
