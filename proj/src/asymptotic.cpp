#include "microrate/asymptotic.hpp"

#include <cmath>

#include "microrate/errors.hpp"
#include "microrate/stochastic.hpp"

namespace microrate {

double psi_eval(double a, double x) noexcept { return (1.0 + a) * std::expm1(x) - x; }

double psi_slope(double a, double x) noexcept { return (1.0 + a) * std::exp(x) - 1.0; }

double solve_x_plus(double a, double tol) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("blow-up root exists only for a > 0");
    }
    if (!(tol > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }

    // psi_a'(0) = a > 0, so psi_a < 0 just left of 0; psi_a -> +inf as x -> -inf.
    double near = -tol;
    if (!(psi_eval(a, near) < 0.0)) {
        throw BracketFailure("psi_a is not negative left of zero at this tolerance");
    }
    double far = -1.0;
    int doublings = 0;
    while (psi_eval(a, far) <= 0.0) {
        near = far;
        far *= 2.0;
        if (++doublings > 200) {
            throw BracketFailure("no lower bracket for the blow-up root");
        }
    }

    // Invariant: psi(far) > 0 > psi(near), far < near.
    for (int iter = 0; iter < 400 && near - far > tol; ++iter) {
        const double mid = 0.5 * (far + near);
        if (mid <= far || mid >= near) {
            break;
        }
        const double v = psi_eval(a, mid);
        if (v == 0.0) {
            return -mid;
        }
        (v > 0.0 ? far : near) = mid;
    }
    double x = 0.5 * (far + near);

    // One Newton step tightens the bisection midpoint well below tol.
    const double slope = psi_slope(a, x);
    if (slope != 0.0) {
        const double polished = x - psi_eval(a, x) / slope;
        if (polished > far && polished < near) {
            x = polished;
        }
    }
    return -x;
}

double approx_q_plus(double a, std::int64_t num_payments, double tol) {
    const double x_plus = solve_x_plus(a, tol);
    const double n = static_cast<double>(num_payments);
    if (!(n > x_plus)) {
        throw DomainError("approximation needs N > x+(a)");
    }
    return 1.0 - x_plus / n;
}

double approx_actuarial_rate(double a, std::int64_t num_payments, std::int64_t periods_per_year,
                             double p, double tol) {
    return actuarial_rate_from_q(approx_q_plus(a, num_payments, tol), p, periods_per_year);
}

AsymptoticSolution solve_asymptotic(double a, std::int64_t num_payments,
                                    std::int64_t periods_per_year, double p, double tol) {
    AsymptoticSolution s;
    s.a = a;
    s.x_plus = solve_x_plus(a, tol);
    s.q_plus_approx = approx_q_plus(a, num_payments, tol);
    s.actuarial_rate_approx = actuarial_rate_from_q(s.q_plus_approx, p, periods_per_year);
    return s;
}

LoanContract contract_for(double a, std::int64_t num_payments, double principal,
                          std::int64_t periods_per_year) {
    if (!(a > 0.0)) {
        throw DomainError("nominal fraction a must be positive");
    }
    if (num_payments < 1) {
        throw InvalidContract("number of payments must be at least 1");
    }
    const double installment = principal * (1.0 + a) / static_cast<double>(num_payments);
    return LoanContract(principal, installment, num_payments, periods_per_year);
}

}  // namespace microrate
