#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gkp/montecarlo.hpp"

using namespace gkp;

namespace {

ShiftDistribution dist_for(double d) {
    return shift_distribution({d, d}, LogicalLabel::zero, 128, 64);
}

}  // namespace

TEST_CASE("config validation") {
    RunConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.trials = 1;
    cfg.rounds = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("deterministic reruns are bit identical") {
    const auto d0 = dist_for(0.25);
    RunConfig cfg;
    cfg.params = {0.25, 0.25};
    cfg.rounds = 3;
    cfg.trials = 2000;
    cfg.master_seed = 424242;
    const auto a = simulate(cfg, d0, d0);
    const auto b = simulate(cfg, d0, d0);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.any_flip_trials == b.any_flip_trials);
    CHECK(a.residual_histogram == b.residual_histogram);
}

TEST_CASE("different seeds explore different histories") {
    const auto d0 = dist_for(0.3);
    RunConfig cfg;
    cfg.params = {0.3, 0.3};
    cfg.rounds = 2;
    cfg.trials = 4000;
    cfg.master_seed = 1;
    const auto a = simulate(cfg, d0, d0);
    cfg.master_seed = 2;
    const auto b = simulate(cfg, d0, d0);
    CHECK(a.to_json() != b.to_json());
}

TEST_CASE("narrow states never flip") {
    const auto d0 = dist_for(0.05);
    RunConfig cfg;
    cfg.params = {0.05, 0.05};
    cfg.rounds = 10;
    cfg.trials = 1000;
    cfg.master_seed = 7;
    const auto stats = simulate(cfg, d0, d0);
    CHECK(stats.any_flip_trials == 0);
    CHECK(stats.x_flip_rate.rate == 0.0);
}

TEST_CASE("wider states flip more often") {
    RunConfig cfg;
    cfg.rounds = 1;
    cfg.trials = 10000;
    cfg.master_seed = 99;

    cfg.params = {0.2, 0.2};
    const auto d02 = dist_for(0.2);
    const auto narrow = simulate(cfg, d02, d02);

    cfg.params = {0.3, 0.3};
    const auto d03 = dist_for(0.3);
    const auto wide = simulate(cfg, d03, d03);

    CHECK(wide.any_flip_rate.rate > narrow.any_flip_rate.rate);
    CHECK(wide.any_flip_rate.ci_low > narrow.any_flip_rate.ci_high);
}

TEST_CASE("observed success respects the analytic lower bound") {
    // one round consumes the qubit plus two ancillas: three states
    const double d = 0.214;
    const auto d0 = dist_for(d);
    RunConfig cfg;
    cfg.params = {d, d};
    cfg.rounds = 1;
    cfg.trials = 10000;
    cfg.master_seed = 2024;
    const auto stats = simulate(cfg, d0, d0);
    const double bound = lower_bound_success(cfg.params, 3);
    CHECK(bound == doctest::Approx(std::pow(p_no_error(cfg.params), 3))
                       .epsilon(1e-12));
    const double observed = 1.0 - stats.any_flip_rate.rate;
    const double sigma =
        std::sqrt(bound * (1.0 - bound) / cfg.trials);
    CHECK(observed >= bound - 4.0 * sigma);
}

TEST_CASE("histogram counts every round and stays in range") {
    const auto d0 = dist_for(0.25);
    RunConfig cfg;
    cfg.params = {0.25, 0.25};
    cfg.rounds = 4;
    cfg.trials = 500;
    cfg.master_seed = 5;
    const auto stats = simulate(cfg, d0, d0);
    std::uint64_t total = 0;
    for (auto c : stats.residual_histogram) total += c;
    CHECK(total == static_cast<std::uint64_t>(cfg.rounds) * cfg.trials);
    const std::string csv = stats.histogram_csv();
    CHECK(csv.rfind("residual_magnitude_bin_low", 0) == 0);
}

TEST_CASE("confidence intervals are ordered and clamped") {
    const auto d0 = dist_for(0.3);
    RunConfig cfg;
    cfg.params = {0.3, 0.3};
    cfg.rounds = 1;
    cfg.trials = 3000;
    cfg.master_seed = 13;
    const auto stats = simulate(cfg, d0, d0);
    for (const auto& est :
         {stats.x_flip_rate, stats.z_flip_rate, stats.any_flip_rate}) {
        CHECK(est.ci_low >= 0.0);
        CHECK(est.ci_low <= est.rate);
        CHECK(est.rate <= est.ci_high);
        CHECK(est.ci_high <= 1.0);
    }
    CHECK(stats.x_flip_trials <= stats.any_flip_trials);
    CHECK(stats.z_flip_trials <= stats.any_flip_trials);
    CHECK(stats.any_flip_trials <= stats.x_flip_trials + stats.z_flip_trials);
}
