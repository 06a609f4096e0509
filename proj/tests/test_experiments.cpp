#include <doctest.h>

#include <fstream>

#include "neurograph/error.hpp"
#include "neurograph/experiments.hpp"
#include "support.hpp"

using namespace neurograph;
namespace fs = std::filesystem;

TEST_CASE("built-in scenario matrices") {
    const WeightMatrix s1 = scenario_matrix(1);
    CHECK(s1(4, 2) == -4.0);  // w_{5->3}
    CHECK(s1(0, 2) == 1.0);   // w_{1->3}
    CHECK(s1(1, 0) == 0.0);   // w_{2->1}
    CHECK(s1.diagonal().isZero());
    CHECK(scenario_matrix(2)(4, 3) == -12.0);
    CHECK(scenario_matrix(3)(0, 2) == 3.0);
    CHECK(scenario_matrix(3)(3, 4) == -4.0);
    CHECK_THROWS_AS(scenario_matrix(5), InputError);
}

TEST_CASE("scenario 4 layout counts") {
    for (std::uint64_t seed : {kDefaultBaseSeed, std::uint64_t{1}, std::uint64_t{77}}) {
        const WeightMatrix w = scenario_matrix(4, seed);
        CHECK(w.rows() == 20);
        CHECK(w.diagonal().isZero());
        CHECK((w.array() != 0).count() == 152);
        CHECK((w.array() == 4).count() == 122);
        CHECK((w.array() == -1).count() == 30);
    }
    CHECK(scenario_matrix(4, 1) == scenario_matrix(4, 1));
    CHECK_FALSE(scenario_matrix(4, 1) == scenario_matrix(4, 2));
}

TEST_CASE("proportion correct counts ordered pairs") {
    const WeightMatrix truth = scenario_matrix(1);  // 18 of 20 pairs connected
    Adjacency all = Adjacency::Ones(5, 5);
    all.diagonal().setZero();
    CHECK(proportion_correct(all, truth) == doctest::Approx(18.0 / 20.0));
    CHECK(proportion_correct(Adjacency::Zero(5, 5), truth) == doctest::Approx(2.0 / 20.0));
    Adjacency exact = (truth.array() != 0).cast<std::uint8_t>();
    CHECK(proportion_correct(exact, truth) == 1.0);
}

TEST_CASE("replicas are deterministic and respect the diagonal") {
    const ScenarioSpec spec = make_scenario(1);
    const ReplicaResult a = run_replica(spec, 500, 3);
    const ReplicaResult b = run_replica(spec, 500, 3);
    CHECK(a.estimate == b.estimate);
    CHECK(a.sensitivities == b.sensitivities);
    CHECK(a.estimate.diagonal().isZero());
    CHECK(a.graphs.size() == spec.epsilons.size());
    CHECK(a.frobenius == doctest::Approx((a.estimate - spec.weights).norm()));
    CHECK_FALSE(run_replica(spec, 500, 4).estimate == a.estimate);
}

TEST_CASE("null diagnostic scenario has small errors at large T") {
    ScenarioSpec spec = custom_scenario(WeightMatrix::Zero(3, 3));
    spec.select = false;
    const ReplicaResult r = run_replica(spec, 20000, 0);
    CHECK(r.squared_errors.maxCoeff() < 0.1);
    CHECK(r.graphs.empty());
}

TEST_CASE("monte carlo aggregation") {
    ScenarioSpec spec = make_scenario(2);
    spec.replicas = 6;
    spec.horizons = {300, 600};
    const MetricsReport one = monte_carlo(spec, 1);
    const MetricsReport two = monte_carlo(spec, 2);
    REQUIRE(one.by_horizon.size() == 2);
    for (std::size_t h = 0; h < 2; ++h) {
        CHECK(one.by_horizon[h].mse == two.by_horizon[h].mse);
        CHECK(one.by_horizon[h].proportion_correct == two.by_horizon[h].proportion_correct);
    }
    const HorizonMetrics& m = one.at(600);
    CHECK(m.replicas_used + m.failed_replicas == 6);
    Eigen::MatrixXd mse = Eigen::MatrixXd::Zero(5, 5);
    double frob = 0.0;
    int used = 0;
    for (const auto& r : one.replicas)
        if (r.horizon == 600 && !r.failed) {
            mse += r.squared_errors;
            frob += r.frobenius;
            ++used;
        }
    CHECK((mse / used - m.mse).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(frob / used == doctest::Approx(m.mean_frobenius));
    CHECK_THROWS_AS(one.at(123), InputError);
}

TEST_CASE("report files") {
    const auto dir = testing::scratch_dir("experiments_report");
    ScenarioSpec spec = make_scenario(1);
    spec.replicas = 2;
    spec.horizons = {200};
    const auto files = write_report(monte_carlo(spec), dir);
    for (const char* name : {"table1.csv", "table6.csv", "distance.csv", "selection_frequency.csv",
                             "replicas.csv", "weights_true.csv"})
        CHECK(fs::exists(dir / name));
    CHECK(files.size() == 6);
    std::ifstream table(dir / "table1.csv");
    std::string header;
    std::getline(table, header);
    CHECK(header == "weight,value,T=200");
    int rows = 0;
    for (std::string line; std::getline(table, line);) ++rows;
    CHECK(rows == 20);

    ScenarioSpec four = make_scenario(4);
    four.replicas = 1;
    four.horizons = {200};
    const auto dir4 = testing::scratch_dir("experiments_report4");
    write_report(monte_carlo(four), dir4);
    CHECK(fs::exists(dir4 / "table4.csv"));
    CHECK(fs::exists(dir4 / "table9.csv"));
}
