#pragma once

// Large-N approximation of the deterministic root.
//
// Substituting q = 1 + x/N into phi(q) = (1+a) q^{N+1} - (N+1+a) q + N and
// letting N grow gives the limit psi_a(x) = (1+a)(e^x - 1) - x. Besides x = 0
// it has one negative root -x+(a), hence q+ ~ 1 - x+(a)/N. The error of this
// approximation is O(1/N^2).

#include <cstdint>

#include "microrate/loan.hpp"

namespace microrate {

struct AsymptoticSolution {
    double a = 0.0;
    double x_plus = 0.0;
    double q_plus_approx = 0.0;
    double actuarial_rate_approx = 0.0;
};

/// (1+a)(e^x - 1) - x, using expm1 so it stays accurate near x = 0.
double psi_eval(double a, double x) noexcept;

/// d/dx psi_a = (1+a) e^x - 1.
double psi_slope(double a, double x) noexcept;

/// x+ > 0 with psi_a(-x+) = 0. Throws DomainError for a <= 0 (psi_0 has only
/// the double root at 0) or tol <= 0, BracketFailure if psi_a is not negative
/// just left of zero (a below tol-level resolution).
double solve_x_plus(double a, double tol = kDefaultTolerance);

/// 1 - x+(a)/N. Throws DomainError unless N > x+(a).
double approx_q_plus(double a, std::int64_t num_payments, double tol = kDefaultTolerance);

/// m ln(1 + p (1/q~ - 1)) at the approximate root q~ = approx_q_plus(a, N).
double approx_actuarial_rate(double a, std::int64_t num_payments, std::int64_t periods_per_year,
                             double p, double tol = kDefaultTolerance);

AsymptoticSolution solve_asymptotic(double a, std::int64_t num_payments,
                                    std::int64_t periods_per_year, double p,
                                    double tol = kDefaultTolerance);

/// The contract with nominal fraction a over N payments of P(1+a)/N each.
LoanContract contract_for(double a, std::int64_t num_payments, double principal = 1000.0,
                          std::int64_t periods_per_year = 52);

}  // namespace microrate
