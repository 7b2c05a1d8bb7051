#pragma once

// Equal-installment microcredit contracts and their deterministic effective
// rate.
//
// A contract lends `principal` and is repaid by `num_payments` installments of
// `installment`, one every period, with `periods_per_year` periods per year.
// With the per-period discount factor q = exp(-r/m), the present value of the
// repayments balances the principal when
//
//     P = c * (q + q^2 + ... + q^N).
//
// Besides the trivial root q = 1 of the associated polynomial, this has a
// unique root q+ in (0, 1) whenever c*N > P; r = -m*ln(q+) is the effective
// continuously-compounded annual rate.

#include <cstdint>

namespace microrate {

inline constexpr double kDefaultTolerance = 1e-12;

/// Dimensionless nominal interest a = (c*N - P) / P. Always > 0.
class NominalInterestFraction {
public:
    /// Throws DomainError unless a > 0 and finite.
    explicit NominalInterestFraction(double a);

    double value() const noexcept { return a_; }

private:
    double a_;
};

class LoanContract {
public:
    /// Throws InvalidContract if any field is non-positive or if
    /// installment * num_payments <= principal.
    LoanContract(double principal, double installment, std::int64_t num_payments,
                 std::int64_t periods_per_year);

    /// The 1000 / 22 x 50 weekly contract used throughout as a smoke test.
    static LoanContract canonical() { return {1000.0, 22.0, 50, 52}; }

    double principal() const noexcept { return principal_; }
    double installment() const noexcept { return installment_; }
    std::int64_t num_payments() const noexcept { return num_payments_; }
    std::int64_t periods_per_year() const noexcept { return periods_per_year_; }

    NominalInterestFraction nominal_fraction() const;

private:
    double principal_;
    double installment_;
    std::int64_t num_payments_;
    std::int64_t periods_per_year_;
};

struct RateSolution {
    double q_plus;       ///< root in (0, 1)
    double annual_rate;  ///< -m * ln(q_plus)
};

/// Balance residual P - c * sum_{k=1..N} q^k, summed in Horner form so that
/// it stays accurate near q = 1. Vanishes at q+; equals P - c*N at q = 1.
double balance_residual(const LoanContract& contract, double q) noexcept;

/// phi(q) = (1+a) q^{N+1} - (N+1+a) q + N. For the canonical contract,
/// 20 * phi equals 22 q^51 - 1022 q + 1000.
double phi_eval(NominalInterestFraction a, std::int64_t num_payments, double q) noexcept;

/// Unique root of the balance residual in (0, 1), to |q - q+| <= tol.
/// Throws DomainError for tol <= 0, NoRootInUnitInterval if the upper bracket
/// scan fails.
RateSolution solve_q_plus(const LoanContract& contract, double tol = kDefaultTolerance);

/// r = -m ln q. Throws DomainError unless 0 < q < 1 and m >= 1.
double rate_from_q(double q, std::int64_t periods_per_year);

/// q = exp(-r/m). Throws DomainError unless r > 0 and m >= 1.
double q_from_rate(double rate, std::int64_t periods_per_year);

}  // namespace microrate
