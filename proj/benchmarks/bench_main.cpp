#include <benchmark/benchmark.h>

#include <random>

#include "sentpw/eval.hpp"
#include "sentpw/losses.hpp"
#include "sentpw/mining.hpp"
#include "sentpw/synthetic.hpp"
#include "sentpw/trainer.hpp"

using namespace sentpw;

namespace {

SimMatrix random_batch_sim(Eigen::Index m, int classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    Matrix V(m, 32);
    for (Eigen::Index i = 0; i < V.size(); ++i) V(i) = n01(rng);
    V.rowwise().normalize();
    std::vector<int> labels;
    for (Eigen::Index i = 0; i < m; ++i) labels.push_back(static_cast<int>(i % classes));
    return make_sim_matrix(V, labels);
}

void BM_multisim_loss(benchmark::State& state) {
    const auto m = state.range(0);
    const SimMatrix sim = random_batch_sim(m, static_cast<int>(m / 4), 1);
    const LossConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(multisim_loss(sim, cfg));
    state.SetComplexityN(m);
}
BENCHMARK(BM_multisim_loss)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_informative_pair_filter(benchmark::State& state) {
    const auto m = state.range(0);
    const SimMatrix sim = random_batch_sim(m, static_cast<int>(m / 4), 2);
    const MiningConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(informative_pair_filter(sim, cfg));
}
BENCHMARK(BM_informative_pair_filter)->RangeMultiplier(2)->Range(16, 256);

void BM_train_step(benchmark::State& state) {
    SyntheticConfig sc;
    const Dataset ds = make_synthetic_corpus(sc);
    const auto sentences = ds.sentences();
    const Vocabulary vocab = build_vocab(sentences);
    TrainConfig cfg;
    cfg.loss = static_cast<LossKind>(state.range(0));
    cfg.filter = default_filter(cfg.loss);
    const TrainingSet set = make_training_set(ds, vocab, cfg.loss);
    TrainState st = make_train_state(init_params(vocab, cfg.d_in, cfg.d_out, cfg.seed), cfg.seed);
    std::optional<ExplicitPairs> ex;
    for (auto _ : state) {
        const TokenBatch batch = next_batch(set, cfg, st.rng, ex);
        benchmark::DoNotOptimize(train_step(st, batch, cfg));
    }
    state.SetLabel(std::string(to_string(cfg.loss)));
}
BENCHMARK(BM_train_step)
    ->Arg(static_cast<int>(LossKind::contrastive))
    ->Arg(static_cast<int>(LossKind::triplet))
    ->Arg(static_cast<int>(LossKind::multisim));

void BM_hit_at_n(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    const auto g = state.range(0);
    Matrix Q(100, 32), G(g, 32);
    for (Eigen::Index i = 0; i < Q.size(); ++i) Q(i) = n01(rng);
    for (Eigen::Index i = 0; i < G.size(); ++i) G(i) = n01(rng);
    std::vector<int> ql, gl;
    for (int i = 0; i < 100; ++i) ql.push_back(i % 20);
    for (Eigen::Index i = 0; i < g; ++i) gl.push_back(static_cast<int>(i % 20));
    for (auto _ : state) benchmark::DoNotOptimize(hit_at_n(Q, G, ql, gl, std::vector<std::size_t>{1, 5, 10}));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_hit_at_n)->Arg(900)->Arg(9000);

}  // namespace

BENCHMARK_MAIN();
