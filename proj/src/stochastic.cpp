#include "microrate/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "microrate/errors.hpp"

namespace microrate {

DelayModel::DelayModel(double p) : p_(p), log_fail_(0.0) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("payment probability p must lie in (0, 1], got " + std::to_string(p));
    }
    if (p < 1.0) {
        log_fail_ = std::log1p(-p);
    }
}

std::int64_t DelayModel::draw(CounterStream& stream) const noexcept {
    if (p_ == 1.0) {
        return 1;
    }
    const double u = stream.uniform_open01();
    const double x = std::ceil(std::log(u) / log_fail_);
    // ln U < 0 and ln(1-p) < 0, so x >= 1 up to the cap.
    constexpr double kCap = 0x1.0p52;
    return static_cast<std::int64_t>(std::clamp(x, 1.0, kCap));
}

double DelayModel::mgf(double t) const {
    const double et = std::exp(t);
    const double denom = 1.0 - (1.0 - p_) * et;
    if (!(denom > 0.0)) {
        throw DomainError("geometric MGF diverges for t >= -ln(1-p)");
    }
    return p_ * et / denom;
}

RepaymentPath::RepaymentPath(std::vector<std::int64_t> gaps) : gaps_(std::move(gaps)) {
    if (gaps_.empty()) {
        throw std::invalid_argument("repayment path needs at least one gap");
    }
    partial_sums_.reserve(gaps_.size());
    std::int64_t total = 0;
    for (std::int64_t g : gaps_) {
        if (g < 1) {
            throw std::invalid_argument("repayment gaps must be >= 1 period");
        }
        total += g;
        partial_sums_.push_back(total);
    }
}

RepaymentPath RepaymentPath::on_schedule(std::int64_t num_payments) {
    if (num_payments < 1) {
        throw std::invalid_argument("repayment path needs at least one gap");
    }
    return RepaymentPath(std::vector<std::int64_t>(static_cast<std::size_t>(num_payments), 1));
}

RepaymentPath RepaymentPath::delayed(std::size_t index, std::int64_t extra) const {
    if (index >= gaps_.size()) {
        throw std::out_of_range("gap index out of range");
    }
    auto gaps = gaps_;
    gaps[index] += extra;
    return RepaymentPath(std::move(gaps));
}

RepaymentPath sample_path(const DelayModel& delays, std::int64_t num_payments,
                          CounterStream& stream) {
    if (num_payments < 1) {
        throw std::invalid_argument("repayment path needs at least one gap");
    }
    std::vector<std::int64_t> gaps(static_cast<std::size_t>(num_payments));
    for (auto& g : gaps) {
        g = delays.draw(stream);
    }
    return RepaymentPath(std::move(gaps));
}

double path_present_value(const LoanContract& contract, const RepaymentPath& path,
                          double rate) noexcept {
    const double per_period = rate / static_cast<double>(contract.periods_per_year());
    double pv = 0.0;
    for (std::int64_t s : path.partial_sums()) {
        pv += std::exp(-per_period * static_cast<double>(s));
    }
    return contract.installment() * pv;
}

namespace {

struct Balance {
    double value;  // PV(R) - P
    double slope;  // dPV/dR
};

Balance balance_at(const LoanContract& contract, const RepaymentPath& path, double rate) {
    const double m = static_cast<double>(contract.periods_per_year());
    double pv = 0.0;
    double dpv = 0.0;
    for (std::int64_t s : path.partial_sums()) {
        const double t = static_cast<double>(s) / m;
        const double e = std::exp(-rate * t);
        pv += e;
        dpv -= t * e;
    }
    return {contract.installment() * pv - contract.principal(), contract.installment() * dpv};
}

}  // namespace

double solve_path_rate(const LoanContract& contract, const RepaymentPath& path, double tol) {
    if (static_cast<std::int64_t>(path.size()) != contract.num_payments()) {
        throw std::invalid_argument("path length " + std::to_string(path.size()) +
                                    " does not match the contract's " +
                                    std::to_string(contract.num_payments()) + " payments");
    }
    if (!(tol > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }

    // PV(0) - P = cN - P > 0 and PV decreases to 0, so [0, hi] brackets the
    // root once PV(hi) < P.
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (balance_at(contract, path, hi).value >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200) {
            throw BracketFailure("no upper bracket for the path rate after 200 doublings");
        }
    }

    // PV is convex and decreasing, so Newton started left of the root climbs
    // monotonically towards it. Bisection takes over if rounding breaks that.
    double x = lo;
    for (int iter = 0; iter < 200; ++iter) {
        const Balance b = balance_at(contract, path, x);
        if (b.value == 0.0) {
            return x;
        }
        (b.value > 0.0 ? lo : hi) = x;
        double next = x - b.value / b.slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 0.5 * tol || hi - lo <= tol) {
            return next;
        }
        x = next;
    }
    return 0.5 * (lo + hi);
}

double actuarial_rate_from_q(double q_plus, double p, std::int64_t periods_per_year) {
    if (!(q_plus > 0.0 && q_plus < 1.0)) {
        throw DomainError("discount factor must lie in (0, 1)");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("payment probability p must lie in (0, 1]");
    }
    if (p == 1.0) {
        return rate_from_q(q_plus, periods_per_year);
    }
    if (periods_per_year < 1) {
        throw DomainError("periods per year must be at least 1");
    }
    return static_cast<double>(periods_per_year) * std::log1p(p * (1.0 / q_plus - 1.0));
}

double actuarial_rate(const LoanContract& contract, const DelayModel& delays, double tol) {
    const RateSolution sol = solve_q_plus(contract, tol);
    return actuarial_rate_from_q(sol.q_plus, delays.p(), contract.periods_per_year());
}

void SimulationConfig::validate() const {
    if (num_trials < 1) {
        throw std::invalid_argument("number of trials must be at least 1");
    }
    if (histogram_bins < 1) {
        throw std::invalid_argument("histogram needs at least one bin");
    }
    if (!(solver_tol > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }
}

SimulationResult run_simulation(const SimulationConfig& config, unsigned threads) {
    config.validate();

    SimulationResult result;
    const RateSolution deterministic = solve_q_plus(config.contract, config.solver_tol);
    result.deterministic_rate = deterministic.annual_rate;
    result.actuarial_rate = actuarial_rate_from_q(
        deterministic.q_plus, config.delay_model.p(), config.contract.periods_per_year());

    const auto trials = static_cast<std::size_t>(config.num_trials);
    result.samples.assign(trials, 0.0);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            CounterStream stream(config.seed, t);
            const RepaymentPath path =
                sample_path(config.delay_model, config.contract.num_payments(), stream);
            result.samples[t] = solve_path_rate(config.contract, path, config.solver_tol);
        }
    };

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
    if (threads <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> workers;
        workers.reserve(threads);
        const std::size_t chunk = (trials + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = std::min(trials, w * chunk);
            const std::size_t end = std::min(trials, begin + chunk);
            workers.emplace_back([&, w, begin, end] {
                try {
                    run_range(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& worker : workers) {
            worker.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    result.stats = summary_stats(result.samples);
    result.histogram = make_histogram(result.samples, config.histogram_bins);
    return result;
}

}  // namespace microrate
