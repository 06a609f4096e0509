#include <doctest.h>

#include <cmath>

#include "neurograph/error.hpp"
#include "neurograph/experiments.hpp"
#include "neurograph/model.hpp"
#include "neurograph/simulator.hpp"
#include "support.hpp"

using namespace neurograph;

namespace {

// Potential of neuron i before t straight from the definition, without the
// library's window helpers.
double brute_potential(const SpikeSample& s, const WeightMatrix& w, int i, int t) {
    const int k = s.memory_cap();
    int last = t - k;
    for (int u = t - 1; u >= t - k; --u)
        if (s(i, u)) {
            last = u;
            break;
        }
    if (last == t - 1) return 0.0;
    double sum = 0.0;
    for (int j = 0; j < s.n_neurons(); ++j)
        for (int u = last + 1; u <= t - 1; ++u) sum += w(j, i) * s(j, u);
    return sum / std::pow(2.0, t - last - 1);
}

}  // namespace

TEST_CASE("admissible initial past") {
    const SpikeMatrix zero = admissible_initial_past(3, 4, InitMode::AllSpikeAtZero, 0.5, 1);
    CHECK(zero.cast<int>().sum() == 3);
    CHECK(zero.col(3).cast<int>().sum() == 3);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SpikeMatrix b = admissible_initial_past(6, 5, InitMode::BernoulliConditioned, 0.5, seed);
        for (int i = 0; i < 6; ++i) CHECK(b.row(i).cast<int>().sum() >= 1);
    }
    for (auto mode : {InitMode::AllSpikeAtZero, InitMode::BernoulliConditioned}) {
        const SpikeMatrix one = admissible_initial_past(1, 1, mode, 0.5, 3);
        CHECK(one(0, 0) == 1);
    }
}

TEST_CASE("all-zero weights give fair coins") {
    SimConfig cfg;
    cfg.horizon = 10000;
    cfg.seed = 5;
    const auto s = simulate(WeightMatrix::Zero(4, 4), cfg);
    for (int i = 0; i < 4; ++i) {
        const double rate = s.data().row(i).tail(cfg.horizon).cast<double>().mean();
        CHECK(std::abs(rate - 0.5) < 0.02);
    }
}

TEST_CASE("conditional frequency matches the hand-computed rate") {
    // w_{2->1} = 10. Given x_{t-2}(1)=1, x_{t-1}(1)=0, x_{t-1}(2)=1: L = t-2,
    // v = 10 * 1 / 2^(t-(t-2)-1) = 5.
    WeightMatrix w = WeightMatrix::Zero(2, 2);
    w(1, 0) = 10.0;
    SimConfig cfg;
    cfg.horizon = 200000;
    cfg.seed = 11;
    const auto s = simulate(w, cfg);
    long hits = 0, total = 0;
    for (int t = 3; t <= cfg.horizon; ++t)
        if (s(0, t - 2) && !s(0, t - 1) && s(1, t - 1)) {
            ++total;
            hits += s(0, t);
        }
    REQUIRE(total > 5000);
    const double p = 1.0 / (1.0 + std::exp(-5.0));
    const double sd = std::sqrt(p * (1 - p) / static_cast<double>(total));
    CHECK(std::abs(static_cast<double>(hits) / static_cast<double>(total) - p) < 4 * sd);
}

TEST_CASE("fixed seed gives identical samples") {
    SimConfig cfg;
    cfg.horizon = 100;
    cfg.seed = 42;
    const WeightMatrix w = scenario_matrix(1);
    CHECK(simulate(w, cfg) == simulate(w, cfg));
    cfg.init_mode = InitMode::BernoulliConditioned;
    CHECK(simulate(w, cfg) == simulate(w, cfg));
    SimConfig other = cfg;
    other.seed = 43;
    CHECK_FALSE(simulate(w, cfg) == simulate(w, other));
}

TEST_CASE("shorter horizons are prefixes of longer ones") {
    SimConfig a, b;
    a.horizon = 300;
    b.horizon = 1000;
    a.seed = b.seed = 99;
    const auto sa = simulate(scenario_matrix(2), a);
    const auto sb = simulate(scenario_matrix(2), b);
    CHECK(sa.data() == sb.data().leftCols(sa.data().cols()));
}

TEST_CASE("exact transition distribution small cases") {
    const auto s2 = testing::sample_from_rows({"01" "10", "10" "11"}, 2);
    const Eigen::VectorXd uniform = exact_transition_distribution(s2, WeightMatrix::Zero(2, 2), 2);
    for (int b = 0; b < 4; ++b) CHECK(uniform(b) == doctest::Approx(0.25).epsilon(1e-15));

    const auto s1 = testing::sample_from_rows({"1" "0000"}, 1);
    WeightMatrix w1 = WeightMatrix::Zero(1, 1);
    const Eigen::VectorXd single = exact_transition_distribution(s1, w1, 3);
    const double p = spike_probability(s1, w1, 0, 3);
    CHECK(single(0) == doctest::Approx(1 - p));
    CHECK(single(1) == doctest::Approx(p));
}

TEST_CASE("exact transition distribution equals the per-neuron product") {
    const WeightMatrix full = scenario_matrix(1);
    WeightMatrix w(3, 3);
    const int idx[3] = {0, 2, 4};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) w(a, b) = full(idx[a], idx[b]);
    const auto s = testing::sample_from_rows({"0010" "10010", "1000" "01100", "0100" "00110"}, 4);
    for (int t = 1; t <= s.horizon(); ++t) {
        const Eigen::VectorXd dist = exact_transition_distribution(s, w, t);
        for (int b = 0; b < 8; ++b) {
            double prod = 1.0;
            for (int i = 0; i < 3; ++i) {
                const double v = brute_potential(s, w, i, t);
                const double p = 1.0 / (1.0 + std::exp(-v));
                prod *= ((b >> i) & 1) ? p : 1 - p;
            }
            CHECK(dist(b) == doctest::Approx(prod).epsilon(1e-13));
        }
    }
}

TEST_CASE("property: transition distributions sum to one") {
    Xoshiro256 rng(77);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = testing::random_int(rng, 1, kMaxExactNeurons);
        const auto s = testing::random_sample(rng, n, 5, 10, 0.4);
        const WeightMatrix w = testing::random_weights(rng, n, 4.0);
        const int t = testing::random_int(rng, 1, 10);
        const Eigen::VectorXd d = exact_transition_distribution(s, w, t);
        CHECK(d.size() == (1 << n));
        CHECK(std::abs(d.sum() - 1.0) <= 1e-12);
        CHECK((d.array() >= 0).all());
    }
    Xoshiro256 big(1);
    const auto s = testing::random_sample(big, 13, 2, 3, 0.5);
    CHECK_THROWS_AS(exact_transition_distribution(s, WeightMatrix::Zero(13, 13), 2), CapabilityError);
}

TEST_CASE("neurons are conditionally independent given the past") {
    // Context: t-3 = (1,0), t-2 = (0,1), t-1 = (1,0). Neuron 1 resets, neuron 2
    // sees one spike of neuron 1. Chi-square test on the 2x2 table of x_t.
    WeightMatrix w = WeightMatrix::Zero(2, 2);
    w(0, 1) = 2.0;
    w(1, 0) = -1.0;
    SimConfig cfg;
    cfg.horizon = 100000;
    cfg.seed = 2024;
    const auto s = simulate(w, cfg);
    double table[2][2] = {{0, 0}, {0, 0}};
    for (int t = 4; t <= cfg.horizon; ++t)
        if (s(0, t - 3) && !s(1, t - 3) && !s(0, t - 2) && s(1, t - 2) && s(0, t - 1) && !s(1, t - 1))
            table[s(0, t)][s(1, t)] += 1;
    const double n = table[0][0] + table[0][1] + table[1][0] + table[1][1];
    REQUIRE(n > 1000);
    double chi2 = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double expected = (table[a][0] + table[a][1]) * (table[0][b] + table[1][b]) / n;
            chi2 += (table[a][b] - expected) * (table[a][b] - expected) / expected;
        }
    CHECK(chi2 < 10.827566170662733);  // chi2_1 upper 0.001 point
}
