#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "microrate/errors.hpp"
#include "microrate/stochastic.hpp"
#include "oracles.hpp"

using namespace microrate;

namespace {
// 52 ln(1 + 0.95 (1/q+ - 1)) at the 40-digit q+ of the canonical contract.
constexpr double kActuarial095 = 0.18756443194727426;
}  // namespace

TEST_CASE("counter streams are reproducible and distinct") {
    CounterStream a(42, 7);
    CounterStream b(42, 7);
    CounterStream c(42, 8);
    CounterStream d(43, 7);
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        same_c += x == c();
        same_d += x == d();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);

    CounterStream u(1, 0);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform_open01();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("delay model domain") {
    CHECK_THROWS_AS(DelayModel(0.0), DomainError);
    CHECK_THROWS_AS(DelayModel(-0.1), DomainError);
    CHECK_THROWS_AS(DelayModel(1.5), DomainError);
    CHECK_THROWS_AS(DelayModel(NAN), DomainError);
    CHECK_NOTHROW(DelayModel(1.0));
    CHECK_NOTHROW(DelayModel(1e-9));
}

TEST_CASE("on-time payer never delays") {
    CounterStream stream(5, 0);
    const auto path = sample_path(DelayModel(1.0), 50, stream);
    REQUIRE(path.size() == 50);
    for (std::size_t n = 0; n < 50; ++n) {
        CHECK(path.gaps()[n] == 1);
        CHECK(path.partial_sums()[n] == static_cast<std::int64_t>(n + 1));
    }
}

TEST_CASE("geometric draws match the law") {
    const double p = 0.5;
    const DelayModel model(p);
    CounterStream stream(99, 0);
    const int n = 100'000;
    double sum = 0.0;
    std::vector<int> freq(5, 0);
    for (int i = 0; i < n; ++i) {
        const auto x = model.draw(stream);
        REQUIRE(x >= 1);
        sum += static_cast<double>(x);
        if (x <= 4) {
            ++freq[static_cast<std::size_t>(x)];
        }
    }
    const double se = std::sqrt((1.0 - p) / (p * p)) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(sum / n - 1.0 / p) < 3.0 * se);
    for (int k = 1; k <= 4; ++k) {
        const double pk = p * std::pow(1.0 - p, k - 1);
        const double se_k = std::sqrt(pk * (1.0 - pk) / n);
        CHECK(std::abs(freq[static_cast<std::size_t>(k)] / static_cast<double>(n) - pk) < 4.0 * se_k);
    }

    const DelayModel likely(0.9);
    for (int i = 0; i < 10'000; ++i) {
        CHECK(likely.draw(stream) >= 1);
    }
}

TEST_CASE("repayment path invariants") {
    CHECK_THROWS_AS(RepaymentPath({}), std::invalid_argument);
    CHECK_THROWS_AS(RepaymentPath({1, 0, 2}), std::invalid_argument);

    CounterStream stream(1, 2);
    const auto path = sample_path(DelayModel(0.7), 200, stream);
    std::int64_t prev = 0;
    for (std::size_t n = 0; n < path.size(); ++n) {
        CHECK(path.partial_sums()[n] - prev == path.gaps()[n]);
        CHECK(path.gaps()[n] >= 1);
        CHECK(path.partial_sums()[n] >= static_cast<std::int64_t>(n + 1));
        prev = path.partial_sums()[n];
    }

    const auto bumped = path.delayed(3);
    CHECK(bumped.gaps()[3] == path.gaps()[3] + 1);
    CHECK(bumped.partial_sums().back() == path.partial_sums().back() + 1);
    CHECK_THROWS_AS(path.delayed(200), std::out_of_range);
}

TEST_CASE("path rate") {
    const auto contract = LoanContract::canonical();
    const double det = solve_q_plus(contract).annual_rate;

    SUBCASE("on schedule equals the deterministic rate") {
        const double r = solve_path_rate(contract, RepaymentPath::on_schedule(50));
        CHECK(std::abs(r - det) < 1e-10);
        CHECK(std::abs(r - 0.1974) < 5e-4);
    }

    SUBCASE("first payment one week late agrees with the grid-scan oracle") {
        std::vector<std::int64_t> gaps(50, 1);
        gaps[0] = 2;
        const RepaymentPath path(gaps);
        const double oracle = testing::grid_scan_path_rate(1000, 22, 52, path.partial_sums());
        const double r = solve_path_rate(contract, path);
        CHECK(std::abs(r - oracle) < 1e-9);
        CHECK(r < det);
        CHECK(std::abs(path_present_value(contract, path, r) - 1000.0) < 1e-8);
    }

    SUBCASE("sampled paths stay in (0, deterministic rate]") {
        const DelayModel model(0.8);
        for (std::uint64_t t = 0; t < 500; ++t) {
            CounterStream stream(17, t);
            const auto path = sample_path(model, 50, stream);
            const double r = solve_path_rate(contract, path);
            CHECK(r > 0.0);
            CHECK(r <= det + 1e-10);
        }
    }

    SUBCASE("one more period of delay strictly lowers the rate") {
        const DelayModel model(0.9);
        std::mt19937_64 pick(5);
        for (std::uint64_t t = 0; t < 200; ++t) {
            CounterStream stream(23, t);
            const auto path = sample_path(model, 50, stream);
            const auto index = static_cast<std::size_t>(pick() % 50);
            CHECK(solve_path_rate(contract, path.delayed(index)) < solve_path_rate(contract, path));
        }
    }

    SUBCASE("very long delays still bracket") {
        const RepaymentPath slow(std::vector<std::int64_t>(50, 1000));
        const double r = solve_path_rate(contract, slow);
        CHECK(r > 0.0);
        CHECK(std::abs(path_present_value(contract, slow, r) - 1000.0) < 1e-8);
    }

    SUBCASE("errors") {
        CHECK_THROWS_AS(solve_path_rate(contract, RepaymentPath::on_schedule(49)),
                        std::invalid_argument);
        CHECK_THROWS_AS(solve_path_rate(contract, RepaymentPath::on_schedule(50), 0.0),
                        DomainError);
    }
}

TEST_CASE("actuarial rate") {
    const auto contract = LoanContract::canonical();
    const auto det = solve_q_plus(contract);

    CHECK(std::abs(actuarial_rate(contract, DelayModel(1.0)) - det.annual_rate) < 1e-10);
    CHECK(std::abs(actuarial_rate(contract, DelayModel(0.95)) - kActuarial095) < 1e-10);
    // Same closed form at the rounded root quoted for the canonical contract.
    CHECK(actuarial_rate_from_q(0.9962107, 0.95, 52) ==
          doctest::Approx(0.18756476100847176).epsilon(1e-12));
    CHECK(actuarial_rate(contract, DelayModel(1e-12)) < 1e-9);
    CHECK(actuarial_rate(contract, DelayModel(1e-12)) > 0.0);

    double previous = 0.0;
    for (double p : {0.5, 0.7, 0.9, 0.99, 1.0}) {
        const double r = actuarial_rate(contract, DelayModel(p));
        CHECK(r > previous);
        previous = r;
    }
}

TEST_CASE("actuarial rate is the MGF fixed point") {
    const auto contract = LoanContract::canonical();
    const double q_plus = solve_q_plus(contract).q_plus;
    for (double p : {0.8, 0.9, 0.99}) {
        const DelayModel model(p);
        const double t = -actuarial_rate(contract, model) / 52.0;
        CHECK(std::abs(model.mgf(t) - q_plus) < 1e-13);

        CounterStream stream(314, static_cast<std::uint64_t>(p * 100));
        const int n = 1'000'000;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = std::exp(t * static_cast<double>(model.draw(stream)));
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        CHECK(std::abs(mean - q_plus) < 3.0 * se);
    }
    CHECK_THROWS_AS(DelayModel(0.5).mgf(1.0), DomainError);
}

TEST_CASE("simulation") {
    SUBCASE("p = 1 is deterministic") {
        SimulationConfig config{.delay_model = DelayModel(1.0), .num_trials = 1000, .seed = 3};
        const auto result = run_simulation(config);
        REQUIRE(result.samples.size() == 1000);
        for (double r : result.samples) {
            CHECK(r == result.samples.front());
            CHECK(std::abs(r - result.deterministic_rate) < 1e-10);
        }
        CHECK(result.stats.std_dev == 0.0);
        CHECK(result.stats.degenerate());
        CHECK(result.histogram.counts.size() == 60);
    }

    const SimulationConfig config{.delay_model = DelayModel(0.95), .num_trials = 100'000, .seed = 42};
    // Shared across subcases; doctest re-enters the test case for each one.
    static const SimulationResult serial = run_simulation(config, 1);

    SUBCASE("thread count does not change the samples") {
        for (unsigned threads : {2u, 3u, 8u, 0u}) {
            const auto parallel = run_simulation(config, threads);
            CHECK(parallel.samples == serial.samples);
        }
    }

    SUBCASE("mean matches an independently coded simulation") {
        const double reference =
            testing::independent_mean_rate(1000, 22, 50, 52, 0.95, 100'000, 20240601);
        const double se = serial.stats.std_dev / std::sqrt(100'000.0);
        CHECK(std::abs(serial.stats.mean - reference) < 3.0 * se);
    }

    SUBCASE("mean tracks the actuarial rate") {
        const double se = serial.stats.std_dev / std::sqrt(100'000.0);
        CHECK(std::abs(serial.stats.mean - serial.actuarial_rate) <= 5.0 * se + 1e-3);
        CHECK(std::abs(serial.actuarial_rate - kActuarial095) < 1e-10);
        CHECK(*serial.stats.kurtosis >= *serial.stats.skewness * *serial.stats.skewness + 1.0);
    }

    SUBCASE("config validation") {
        SimulationConfig bad = config;
        bad.num_trials = 0;
        CHECK_THROWS_AS(run_simulation(bad), std::invalid_argument);
        bad = config;
        bad.histogram_bins = 0;
        CHECK_THROWS_AS(run_simulation(bad), std::invalid_argument);
        bad = config;
        bad.solver_tol = -1.0;
        CHECK_THROWS_AS(run_simulation(bad), DomainError);
    }
}
