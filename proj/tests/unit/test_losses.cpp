#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles/finite_diff.hpp"
#include "oracles/random_instances.hpp"
#include "sentpw/errors.hpp"
#include "sentpw/losses.hpp"
#include "sentpw/mining.hpp"

using namespace sentpw;
using sentpw::testing::random_sim;

namespace {

// Hand-built instance; S entries listed for the upper triangle.
SimMatrix sim_of(const std::vector<int>& labels, const Matrix& S) {
    SimMatrix sim;
    sim.S = S;
    sim.labels = labels;
    auto m = pair_masks(labels);
    sim.pos = m.pos;
    sim.neg = m.neg;
    return sim;
}

// Only the pairs of anchor 0 are active.
SimMatrix anchor_zero_only(SimMatrix sim) {
    for (Eigen::Index i = 1; i < sim.size(); ++i) {
        sim.pos.row(i).setConstant(false);
        sim.neg.row(i).setConstant(false);
    }
    return sim;
}

constexpr double kFdFloor = 1e-3;

}  // namespace

TEST_CASE("contrastive examples") {
    Matrix S(2, 2);
    LossConfig cfg;

    S << 1, 0.3, 0.3, 1;
    auto r = contrastive_loss(sim_of({0, 1}, S), cfg);
    CHECK(r.loss == 0.0);
    CHECK(r.W.isZero(0.0));

    S << 1, 0.8, 0.8, 1;
    r = contrastive_loss(sim_of({0, 0}, S), cfg);
    CHECK(r.loss == doctest::Approx(-0.8));
    CHECK(r.dS(0, 1) == doctest::Approx(-0.5));

    S << 1, 0.7, 0.7, 1;
    r = contrastive_loss(sim_of({0, 1}, S), cfg);
    CHECK(r.loss == doctest::Approx(0.2));
    CHECK(r.W(0, 1) == doctest::Approx(0.5));  // 1/N with N = 2 ordered pairs

    SimMatrix none = sim_of({0}, Matrix::Ones(1, 1));
    CHECK(contrastive_loss(none, cfg).loss == 0.0);
}

TEST_CASE("soft-margin triplet examples") {
    Matrix S(3, 3);
    S << 1, 0.4, 0.4, 0.4, 1, 0, 0.4, 0, 1;
    SimMatrix sim = sim_of({0, 0, 1}, S);
    auto r = triplet_softmargin_loss(sim, {{0, 1, 2}});
    CHECK(r.loss == doctest::Approx(std::log(2.0)));
    CHECK(r.W(0, 1) == doctest::Approx(0.5));
    CHECK(r.W(0, 2) == doctest::Approx(0.5));

    S << 1, 1, 0, 1, 1, 0, 0, 0, 1;
    r = triplet_softmargin_loss(sim_of({0, 0, 1}, S), {{0, 1, 2}});
    CHECK(r.loss == doctest::Approx(0.31326168751822286).epsilon(1e-12));

    S << 1, 1, -1, 1, 1, 0, -1, 0, 1;
    SimMatrix far = sim_of({0, 0, 1}, S);
    far.S(0, 2) = -1000.0;  // far tail of the softplus
    r = triplet_softmargin_loss(far, {{0, 1, 2}});
    CHECK(r.loss < 1e-300);
    CHECK(r.W(0, 2) < 1e-300);

    CHECK(triplet_softmargin_loss(sim, {}).loss == 0.0);
    CHECK_THROWS_AS(triplet_softmargin_loss(sim, {{0, 2, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(triplet_softmargin_loss(sim, {{0, 1, 5}}), std::invalid_argument);
}

TEST_CASE("multi-similarity loss examples") {
    LossConfig cfg;  // alpha 2, beta 50, lambda 0.5
    Matrix S(3, 3);
    S << 1, 0.9, 0.4, 0.9, 1, 0, 0.4, 0, 1;
    const SimMatrix sim = anchor_zero_only(sim_of({0, 0, 1}, S));
    const auto r = multisim_loss(sim, cfg);
    const double direct = 0.5 * std::log(1 + std::exp(-2 * (0.9 - 0.5))) + std::log(1 + std::exp(50 * (0.4 - 0.5))) / 50;
    // loss averages over the m = 3 rows; a single anchor carries all of it
    CHECK(3 * r.loss == doctest::Approx(direct).epsilon(1e-14));
    CHECK(3 * r.loss == doctest::Approx(0.1857).epsilon(1e-3));

    SimMatrix empty = sim_of({0, 1}, Matrix::Identity(2, 2));
    empty.pos.setConstant(false);
    empty.neg.setConstant(false);
    CHECK(multisim_loss(empty, cfg).loss == 0.0);

    // a far negative barely moves the loss
    Matrix S4(4, 4);
    S4 << 1, 0.9, 0.4, -1, 0.9, 1, 0, 0, 0.4, 0, 1, 0, -1, 0, 0, 1;
    SimMatrix with_far = anchor_zero_only(sim_of({0, 0, 1, 2}, S4));
    SimMatrix without_far = with_far;
    without_far.neg(0, 3) = false;
    const double delta = 4 * (multisim_loss(with_far, cfg).loss - multisim_loss(without_far, cfg).loss);
    CHECK(std::abs(delta) < 1e-10);

    LossConfig bad = cfg;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(multisim_loss(sim, bad), ConfigError);
}

TEST_CASE("closed-form multi-similarity weights") {
    LossConfig cfg;
    Matrix S(2, 2);
    S << 1, 0.4, 0.4, 1;
    const Matrix w = ms_pair_weights(sim_of({0, 1}, S), cfg);
    CHECK(w(0, 1) == doctest::Approx(0.0066928509242848554).epsilon(1e-12));
    CHECK(w(0, 0) == 0.0);

    Matrix S3(3, 3);
    S3 << 1, 0.3, 0.3, 0.3, 1, 0.1, 0.3, 0.1, 1;
    const Matrix w3 = ms_pair_weights(sim_of({0, 1, 2}, S3), cfg);
    CHECK(w3(0, 1) == w3(0, 2));
}

TEST_CASE("weights equal m times |dL/dS| on random instances") {
    std::mt19937_64 rng(101);
    LossConfig cfg;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index m = 2 + trial % 10;
        const SimMatrix sim = random_sim(rng, m, 3);
        const auto r = multisim_loss(sim, cfg);
        const Matrix w = ms_pair_weights(sim, cfg);
        worst = std::max(worst, (static_cast<double>(m) * r.dS.cwiseAbs() - w).cwiseAbs().maxCoeff());
        CHECK((extract_pair_weights(r, sim) * static_cast<double>(m) - w).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("analytic dL/dS matches finite differences for every loss") {
    std::mt19937_64 rng(202);
    LossConfig cfg;
    MiningConfig mining;
    double worst_c = 0.0, worst_t = 0.0, worst_ms = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        SimMatrix sim = random_sim(rng, 5, 2);
        const auto triplets = hard_mine(sim, mining).triplets;
        auto with_S = [&](const Matrix& S) {
            SimMatrix s = sim;
            s.S = S;
            return s;
        };
        const double h = 1e-6;
        worst_c = std::max(worst_c, oracle::max_relative_error(
            contrastive_loss(sim, cfg).dS,
            oracle::numeric_gradient([&](const Matrix& S) { return contrastive_loss(with_S(S), cfg).loss; }, sim.S, h),
            kFdFloor));
        worst_t = std::max(worst_t, oracle::max_relative_error(
            triplet_softmargin_loss(sim, triplets).dS,
            oracle::numeric_gradient([&](const Matrix& S) { return triplet_softmargin_loss(with_S(S), triplets).loss; }, sim.S, h),
            kFdFloor));
        worst_ms = std::max(worst_ms, oracle::max_relative_error(
            multisim_loss(sim, cfg).dS,
            oracle::numeric_gradient([&](const Matrix& S) { return multisim_loss(with_S(S), cfg).loss; }, sim.S, h),
            kFdFloor));
    }
    CHECK(worst_c < 1e-6);
    CHECK(worst_t < 1e-6);
    CHECK(worst_ms < 1e-6);
}

TEST_CASE("sign convention holds for every loss") {
    std::mt19937_64 rng(303);
    LossConfig cfg;
    MiningConfig mining;
    for (int trial = 0; trial < 200; ++trial) {
        const SimMatrix sim = random_sim(rng, 2 + trial % 11, 1 + trial % 4);
        CHECK_NOTHROW(extract_pair_weights(contrastive_loss(sim, cfg), sim));
        CHECK_NOTHROW(extract_pair_weights(multisim_loss(sim, cfg), sim));
        CHECK_NOTHROW(extract_pair_weights(triplet_softmargin_loss(sim, hard_mine(sim, mining).triplets), sim));
    }
}

TEST_CASE("extracted weights per loss") {
    std::mt19937_64 rng(404);
    LossConfig cfg;
    MiningConfig mining;
    for (int trial = 0; trial < 30; ++trial) {
        const SimMatrix sim = random_sim(rng, 6, 2);
        const auto triplets = hard_mine(sim, mining).triplets;
        const Matrix wt = extract_pair_weights(triplet_softmargin_loss(sim, triplets), sim);
        Matrix expected = Matrix::Zero(6, 6);
        const double T = static_cast<double>(triplets.size());
        for (const auto& t : triplets) {
            const double sigma = 1.0 / (1.0 + std::exp(-(sim.S(t.anchor, t.negative) - sim.S(t.anchor, t.positive))));
            expected(t.anchor, t.negative) += sigma / T;
            expected(t.anchor, t.positive) += sigma / T;
        }
        CHECK((wt - expected).cwiseAbs().maxCoeff() < 1e-15);

        const Matrix wc = extract_pair_weights(contrastive_loss(sim, cfg), sim);
        const double unit = 1.0 / static_cast<double>(sim.positive_count() + sim.negative_count());
        for (Eigen::Index i = 0; i < wc.size(); ++i) CHECK((wc(i) == 0.0 || wc(i) == unit));

        const Matrix wm = extract_pair_weights(multisim_loss(sim, cfg), sim);
        CHECK((wm - ms_pair_weights(sim, cfg) / 6.0).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("sign violations are reported") {
    Matrix S(2, 2);
    S << 1, 0.7, 0.7, 1;
    const SimMatrix sim = sim_of({0, 1}, S);
    LossReport bad{0.0, Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
    bad.dS(0, 1) = -0.1;
    CHECK_THROWS_AS(extract_pair_weights(bad, sim), std::logic_error);
    bad.dS(0, 1) = 0.0;
    bad.dS(0, 0) = 0.1;
    CHECK_THROWS_AS(extract_pair_weights(bad, sim), std::logic_error);
}

TEST_CASE("multi-similarity loss is invariant to pair order within an anchor") {
    std::mt19937_64 rng(505);
    LossConfig cfg;
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index m = 7;
        const SimMatrix sim = random_sim(rng, m, 3);
        std::vector<Eigen::Index> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        // relabel the batch rows
        SimMatrix p = sim;
        for (Eigen::Index i = 0; i < m; ++i) {
            p.labels[i] = sim.labels[perm[i]];
            for (Eigen::Index j = 0; j < m; ++j) {
                p.S(i, j) = sim.S(perm[i], perm[j]);
                p.pos(i, j) = sim.pos(perm[i], perm[j]);
                p.neg(i, j) = sim.neg(perm[i], perm[j]);
            }
        }
        CHECK(multisim_loss(p, cfg).loss == doctest::Approx(multisim_loss(sim, cfg).loss).epsilon(1e-13));
    }
}

TEST_CASE("a negative pair's own weight grows with its similarity") {
    std::mt19937_64 rng(606);
    LossConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
        SimMatrix sim = random_sim(rng, 6, 2);
        Eigen::Index i = -1, j = -1;
        for (Eigen::Index a = 0; a < 6 && i < 0; ++a) {
            for (Eigen::Index b = 0; b < 6; ++b) {
                if (sim.neg(a, b)) {
                    i = a;
                    j = b;
                    break;
                }
            }
        }
        if (i < 0) continue;
        const double before = ms_pair_weights(sim, cfg)(i, j);
        sim.S(i, j) = std::min(1.0, sim.S(i, j) + 0.05);
        CHECK(ms_pair_weights(sim, cfg)(i, j) > before);
    }
}

TEST_CASE("threaded multi-similarity matches single-threaded") {
    std::mt19937_64 rng(707);
    LossConfig cfg;
    const SimMatrix sim = random_sim(rng, 12, 4);
    const auto a = multisim_loss(sim, cfg, 1);
    const auto b = multisim_loss(sim, cfg, 4);
    CHECK(a.loss == b.loss);
    CHECK(a.dS == b.dS);
}

TEST_CASE("loss kind names") {
    CHECK(parse_loss_kind("multisim") == LossKind::multisim);
    CHECK(to_string(LossKind::triplet) == "triplet");
    CHECK_THROWS_AS(parse_loss_kind("npair"), ConfigError);
}
