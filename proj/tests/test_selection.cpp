#include <doctest.h>

#include <cmath>

#include "neurograph/error.hpp"
#include "neurograph/estimator.hpp"
#include "neurograph/experiments.hpp"
#include "neurograph/model.hpp"
#include "neurograph/selection.hpp"
#include "neurograph/simulator.hpp"
#include "support.hpp"

using namespace neurograph;
using testing::sample_from_rows;

namespace {

SpikeSample simulated(const WeightMatrix& w, int horizon, std::uint64_t seed) {
    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.seed = seed;
    return simulate(w, cfg);
}

PredictedProbVector constant_vector(int horizon, double p) {
    PredictedProbVector v;
    v.probs = Eigen::VectorXd::Constant(horizon, p);
    return v;
}

}  // namespace

TEST_CASE("predicted probabilities on a hand history") {
    // K = 3, w_hat = (0, 1) for neuron 0. Rows: t=1 reset; t=2 l=2, one
    // spike of neuron 1 -> z = 1/2; t=3 reset; t=4 l=2, no spike -> z = 0;
    // t=5 l=3, one spike -> z = 1/4.
    const auto s = sample_from_rows({"001" "01000", "100" "11011"}, 3);
    FitResult fit;
    fit.neuron = 0;
    fit.weights = Eigen::Vector2d(0.0, 1.0);
    fit.support = full_support(2, 0);
    NeuronMask subset = NeuronMask::Constant(2, true);
    const auto p = predicted_probabilities(s, 0, subset, fit);
    const double expected[5] = {0.5, 0.6224593312018546, 0.5, 0.5, 0.5621765008857981};
    for (int t = 0; t < 5; ++t) CHECK(p.probs(t) == doctest::Approx(expected[t]).epsilon(1e-15));

    FitResult zero = fit;
    zero.weights.setZero();
    CHECK((predicted_probabilities(s, 0, subset, zero).probs.array() == 0.5).all());

    NeuronMask wrong = subset;
    wrong(1) = false;
    CHECK_THROWS_AS(predicted_probabilities(s, 0, wrong, fit), InputError);
}

TEST_CASE("predicted probabilities follow the fitted logistic") {
    const auto s = simulated(scenario_matrix(1), 500, 3);
    const FitResult fit = fit_neuron(s, 2);
    const FeatureTable f = build_features(s, 2);
    const auto p = predicted_probabilities(f, NeuronMask::Constant(5, true), fit);
    for (int t = 0; t < f.horizon(); ++t)
        CHECK(p.probs(t) == doctest::Approx(f.gate(t) ? logistic(f.z.row(t).dot(fit.weights)) : 0.5));
}

TEST_CASE("sensitivity arithmetic") {
    const auto a = constant_vector(37, 0.5), b = constant_vector(37, 0.6);
    CHECK(sensitivity(a, a) == 0.0);
    CHECK(sensitivity(a, b) == doctest::Approx(0.01).epsilon(1e-12));
    Xoshiro256 rng(1);
    for (int rep = 0; rep < 100; ++rep) {
        PredictedProbVector p, q;
        p.probs = (testing::random_vector(rng, 50, 0.5).array() + 0.5).matrix();
        q.probs = (testing::random_vector(rng, 50, 0.5).array() + 0.5).matrix();
        CHECK(sensitivity(p, q) == sensitivity(q, p));
        CHECK(sensitivity(p, q) >= 0.0);
        CHECK(sensitivity(p, q) <= 1.0);
        CHECK(sensitivity(p, p) == 0.0);
    }
    CHECK_THROWS_AS(sensitivity(constant_vector(3, 0.5), constant_vector(4, 0.5)), InputError);
}

TEST_CASE("leave-one-out sensitivities match explicit refits") {
    const auto s = simulated(scenario_matrix(3), 1500, 21);
    const FeatureTable f = build_features(s, 4);
    const NeuronSelection sel = select_neuron(compress(f));
    const auto full = predicted_probabilities(f, NeuronMask::Constant(5, true), sel.full);
    for (int j = 0; j < 4; ++j) {
        NeuronMask support = full_support(5, 4);
        support(j) = false;
        const FitResult reduced = fit_neuron(compress(f), {}, support);
        CHECK((reduced.weights - sel.reduced[j].weights).cwiseAbs().maxCoeff() < 1e-6);
        NeuronMask subset = NeuronMask::Constant(5, true);
        subset(j) = false;
        const auto p = predicted_probabilities(f, subset, reduced);
        CHECK(sel.sensitivities(j) == doctest::Approx(sensitivity(p, full)).epsilon(1e-8));
        CHECK(sel.lrt(j) >= 0.0);
    }
    CHECK(sel.sensitivities(4) == 0.0);
}

TEST_CASE("property: neighborhoods are nested in epsilon") {
    Xoshiro256 rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = testing::random_int(rng, 2, 5);
        const auto s = simulated(testing::random_weights(rng, n, 3.0), 400 + 50 * rep, 500 + rep);
        const GraphSelection g = select_graph(s);
        std::vector<double> eps{1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
        for (std::size_t k = 0; k + 1 < eps.size(); ++k) {
            const Adjacency small = threshold_graph(g.sensitivities, eps[k]);
            const Adjacency large = threshold_graph(g.sensitivities, eps[k + 1]);
            CHECK(((large.array() <= small.array())).all());
        }
        CHECK(threshold_graph(g.sensitivities, 1.0).cast<int>().sum() == 0);
        CHECK(g.sensitivities.diagonal().isZero());
        CHECK((g.lrt.array() >= 0).all());
        // relaxed Pinsker: a vanishing likelihood gain means a vanishing d
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (j != i && g.lrt(j, i) < 1e-9) CHECK(g.sensitivities(j, i) < 1e-6);
    }
}

TEST_CASE("whole-graph selection agrees with per-neuron calls and is thread independent") {
    const auto s = simulated(scenario_matrix(1), 2000, 17);
    const GraphSelection one = select_graph(s, {}, 1);
    const GraphSelection three = select_graph(s, {}, 3);
    CHECK(one.weights == three.weights);
    CHECK(one.sensitivities == three.sensitivities);
    CHECK(one.weights == fit_network(s).weights);
    const NeighborhoodEstimate hood = estimate_neighborhood(s, 2, 1e-3);
    std::vector<int> expected;
    for (int j = 0; j < 5; ++j)
        if (one.sensitivities(j, 2) > 1e-3) expected.push_back(j);
    CHECK(hood.selected == expected);
}

TEST_CASE("null data selects nothing at 1e-3") {
    int empty = 0;
    for (int seed = 0; seed < 10; ++seed) {
        const auto s = simulated(WeightMatrix::Zero(3, 3), 10000, 300 + seed);
        const Adjacency a = threshold_graph(select_graph(s).sensitivities, 1e-3);
        empty += a.cast<int>().sum() == 0;
    }
    CHECK(empty >= 9);
}

TEST_CASE("scenario 1 at large T: absent pair excluded, strong pair included") {
    int excluded = 0, included = 0;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
        const auto s = simulated(scenario_matrix(1), 10000, 700 + r);
        const Adjacency a = threshold_graph(select_graph(s).sensitivities, 1e-3);
        excluded += a(1, 0) == 0;  // w_{2->1} = 0
        included += a(4, 2) == 1;  // w_{5->3} = -4
    }
    CHECK(excluded >= 8);
    CHECK(included == reps);
}

TEST_CASE("null likelihood-ratio statistic has mean one") {
    double sum = 0.0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const auto s = simulated(WeightMatrix::Zero(2, 2), 2000, 9000 + r);
        const double lrt = lrt_statistic(s, 0, 1);
        CHECK(lrt >= 0.0);
        sum += lrt;
    }
    CHECK(std::abs(sum / reps - 1.0) <= 0.3);
}

TEST_CASE("a neuron with no features has a zero statistic") {
    // Neuron 1 only spikes at t = -K+1, which no window ever reaches.
    Xoshiro256 rng(5);
    std::string a = "001", b = "100";
    for (int t = 0; t < 200; ++t) {
        a += rng.bernoulli(0.5) ? '1' : '0';
        b += '0';
    }
    const auto s = sample_from_rows({a, b}, 3);
    CHECK(lrt_statistic(s, 0, 1) == 0.0);
    const auto hood = estimate_neighborhood(s, 0, 1e-12);
    CHECK(hood.selected.empty());
}

TEST_CASE("epsilon from a significance level") {
    CHECK(chi_square1_upper_quantile(0.05) == doctest::Approx(3.841458820694124).epsilon(1e-12));
    CHECK(chi_square1_upper_quantile(0.01) == doctest::Approx(6.6348966010212145).epsilon(1e-12));
    CHECK(chi_square1_upper_quantile(0.001) == doctest::Approx(10.827566170662733).epsilon(1e-12));
    CHECK(epsilon_from_alpha(0.05, 10000) == doctest::Approx(3.841458820694124 / 20000).epsilon(1e-12));
    double prev = 1e300;
    for (int t : {10, 100, 1000, 10000, 100000}) {
        const double e = epsilon_from_alpha(0.05, t);
        CHECK(e < prev);
        prev = e;
    }
    CHECK(epsilon_from_alpha(1.0 - 1e-12, 100) < 1e-20);
    CHECK_THROWS_AS(epsilon_from_alpha(0.0, 100), InputError);
    CHECK_THROWS_AS(epsilon_from_alpha(0.5, 0), InputError);
}

TEST_CASE("theoretical margin") {
    const auto m = theoretical_margin(Eigen::Vector2d(0.0, 1.0));
    REQUIRE(m.has_value());
    CHECK(*m == doctest::Approx(0.19661193324148185).epsilon(1e-14));
    CHECK_FALSE(theoretical_margin(Eigen::Vector3d::Zero()).has_value());
    for (double a : {0.3, 1.0, 4.0}) {
        const auto sym = theoretical_margin(Eigen::Vector2d(-a, a));
        REQUIRE(sym.has_value());
        CHECK(*sym == doctest::Approx(logistic_derivative(a) * a));
        CHECK(logistic_derivative(a) == doctest::Approx(logistic_derivative(-a)));
    }
    // scenario 1, neuron 3: D = [-4, 3]; inf phi' = phi'(4); min |w| = 1
    const auto s1 = theoretical_margin(scenario_matrix(1).col(2));
    CHECK(*s1 == doctest::Approx(logistic_derivative(4.0)));
}

TEST_CASE("selection trends in T on null and connected pairs") {
    // neuron 0 receives w = 2 from neuron 1 and nothing from neuron 2.
    WeightMatrix w = WeightMatrix::Zero(3, 3);
    w(1, 0) = 2.0;
    w(0, 2) = 1.0;
    const double eps = 1e-3;
    REQUIRE(eps < *theoretical_margin(w.col(0)));
    std::vector<double> false_pos, missed;
    for (int horizon : {250, 1000, 4000}) {
        int fp = 0, miss = 0;
        for (int r = 0; r < 100; ++r) {
            const auto s = simulated(w, horizon, 40000 + r);
            const NeuronSelection sel = select_neuron(compress(build_features(s, 0)));
            fp += sel.sensitivities(2) > eps;
            miss += sel.sensitivities(1) <= eps;
        }
        false_pos.push_back(fp / 100.0);
        missed.push_back(miss / 100.0);
    }
    MESSAGE("false positives " << false_pos[0] << " " << false_pos[1] << " " << false_pos[2]);
    MESSAGE("missed " << missed[0] << " " << missed[1] << " " << missed[2]);
    for (int k = 0; k < 2; ++k) {
        CHECK(false_pos[k + 1] <= false_pos[k]);
        CHECK(missed[k + 1] <= missed[k]);
    }
    CHECK(false_pos[2] < false_pos[0]);
    CHECK(missed[2] < missed[0]);
}
