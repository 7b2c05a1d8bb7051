#pragma once

// Random repayment delays and the rate they induce.
//
// Installment n lands S_n = X_1 + ... + X_n periods after disbursement, where
// the gaps X_i are i.i.d. geometric on {1, 2, ...} with P(X = 1) = p. The
// realized annual rate R solves
//
//     P = sum_n c * exp(-R * S_n / m).

#include <cstdint>
#include <span>
#include <vector>

#include "microrate/loan.hpp"
#include "microrate/random.hpp"
#include "microrate/statistics.hpp"

namespace microrate {

/// Geometric delay law G(p): P(X = k) = p (1-p)^(k-1), k >= 1.
class DelayModel {
public:
    /// Throws DomainError unless 0 < p <= 1.
    explicit DelayModel(double p);

    double p() const noexcept { return p_; }

    /// Inverse transform: X = ceil(ln U / ln(1-p)); X = 1 when p = 1.
    std::int64_t draw(CounterStream& stream) const noexcept;

    /// E[exp(t X)] for t < -ln(1-p).
    double mgf(double t) const;

private:
    double p_;
    double log_fail_;  // ln(1 - p), unused when p == 1
};

class RepaymentPath {
public:
    /// Throws std::invalid_argument if gaps is empty or any gap is < 1.
    explicit RepaymentPath(std::vector<std::int64_t> gaps);

    /// All gaps equal to one: payments exactly on schedule.
    static RepaymentPath on_schedule(std::int64_t num_payments);

    std::span<const std::int64_t> gaps() const noexcept { return gaps_; }
    std::span<const std::int64_t> partial_sums() const noexcept { return partial_sums_; }
    std::size_t size() const noexcept { return gaps_.size(); }

    /// Copy with gaps[index] increased by `extra` periods.
    RepaymentPath delayed(std::size_t index, std::int64_t extra = 1) const;

private:
    std::vector<std::int64_t> gaps_;
    std::vector<std::int64_t> partial_sums_;
};

RepaymentPath sample_path(const DelayModel& delays, std::int64_t num_payments,
                          CounterStream& stream);

/// Present value sum_n c exp(-R S_n / m) of the installments along a path.
double path_present_value(const LoanContract& contract, const RepaymentPath& path,
                          double rate) noexcept;

/// The unique R > 0 balancing the path's present value against the
/// principal, to |R - R*| <= tol. Throws std::invalid_argument on a path
/// length mismatch, DomainError for tol <= 0, BracketFailure if no upper
/// bracket is found within 200 doublings.
double solve_path_rate(const LoanContract& contract, const RepaymentPath& path,
                       double tol = kDefaultTolerance);

/// Rate r such that replacing R by r balances the expected present value:
/// r = m ln(1 + p (1/q+ - 1)).
double actuarial_rate(const LoanContract& contract, const DelayModel& delays,
                      double tol = kDefaultTolerance);

/// Closed form above for a known discount factor q+.
double actuarial_rate_from_q(double q_plus, double p, std::int64_t periods_per_year);

struct SimulationConfig {
    LoanContract contract = LoanContract::canonical();
    DelayModel delay_model{0.95};
    std::int64_t num_trials = 100'000;
    std::uint64_t seed = 42;
    double solver_tol = kDefaultTolerance;
    std::size_t histogram_bins = 60;

    /// Throws std::invalid_argument on num_trials < 1, bins < 1 or tol <= 0.
    void validate() const;
};

struct SimulationResult {
    std::vector<double> samples;  ///< R per trial, in trial order
    SummaryStats stats;
    Histogram histogram;
    double deterministic_rate = 0.0;
    double actuarial_rate = 0.0;
};

/// Trial t draws its path from CounterStream(seed, t), so the output is
/// bit-identical for any `threads` (0 means hardware concurrency).
SimulationResult run_simulation(const SimulationConfig& config, unsigned threads = 1);

}  // namespace microrate
