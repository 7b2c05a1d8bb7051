#include "microrate/loan.hpp"

#include <cmath>
#include <string>

#include "microrate/errors.hpp"

namespace microrate {

NominalInterestFraction::NominalInterestFraction(double a) : a_(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError("nominal interest fraction must be positive and finite, got " +
                          std::to_string(a));
    }
}

LoanContract::LoanContract(double principal, double installment, std::int64_t num_payments,
                           std::int64_t periods_per_year)
    : principal_(principal),
      installment_(installment),
      num_payments_(num_payments),
      periods_per_year_(periods_per_year) {
    if (!(principal > 0.0) || !std::isfinite(principal)) {
        throw InvalidContract("principal must be positive and finite");
    }
    if (!(installment > 0.0) || !std::isfinite(installment)) {
        throw InvalidContract("installment must be positive and finite");
    }
    if (num_payments < 1) {
        throw InvalidContract("number of payments must be at least 1");
    }
    if (periods_per_year < 1) {
        throw InvalidContract("periods per year must be at least 1");
    }
    if (!(installment * static_cast<double>(num_payments) > principal)) {
        throw InvalidContract(
            "installment x payments must exceed principal (nominal interest a > 0)");
    }
}

NominalInterestFraction LoanContract::nominal_fraction() const {
    const double total = installment_ * static_cast<double>(num_payments_);
    return NominalInterestFraction((total - principal_) / principal_);
}

double balance_residual(const LoanContract& contract, double q) noexcept {
    // q + q^2 + ... + q^N == q(1 + q(1 + ... q(1)))
    double sum = 0.0;
    for (std::int64_t k = 0; k < contract.num_payments(); ++k) {
        sum = q * (1.0 + sum);
    }
    return contract.principal() - contract.installment() * sum;
}

double phi_eval(NominalInterestFraction a, std::int64_t num_payments, double q) noexcept {
    const double n = static_cast<double>(num_payments);
    const double av = a.value();
    return (1.0 + av) * std::pow(q, n + 1.0) - (n + 1.0 + av) * q + n;
}

RateSolution solve_q_plus(const LoanContract& contract, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("solver tolerance must be positive");
    }

    // The residual is P > 0 at q = 0, decreasing on (0, 1), and negative on
    // (q+, 1). Walk the upper bracket towards 1 until it changes sign.
    double lo = 0.0;
    double hi = 0.0;
    bool bracketed = false;
    for (int i = 1; i <= 60; ++i) {
        const double h = 1.0 - std::ldexp(1.0, -i);
        if (h >= 1.0) {
            break;
        }
        const double r = balance_residual(contract, h);
        if (r == 0.0) {
            return {h, rate_from_q(h, contract.periods_per_year())};
        }
        if (r < 0.0) {
            hi = h;
            bracketed = true;
            break;
        }
        lo = h;
    }
    if (!bracketed) {
        throw NoRootInUnitInterval("balance residual has no sign change in (0, 1)");
    }

    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double r = balance_residual(contract, mid);
        if (r == 0.0) {
            lo = hi = mid;
            break;
        }
        (r > 0.0 ? lo : hi) = mid;
    }

    double q = 0.5 * (lo + hi);

    // Newton polish; kept only if it stays inside the final bracket.
    double sum = 0.0;
    double slope = 0.0;  // d/dq of q + ... + q^N
    for (std::int64_t k = 0; k < contract.num_payments(); ++k) {
        slope = sum + 1.0 + q * slope;
        sum = q * (1.0 + sum);
    }
    if (slope > 0.0) {
        const double residual = contract.principal() - contract.installment() * sum;
        const double polished = q + residual / (contract.installment() * slope);
        if (polished >= lo && polished <= hi) {
            q = polished;
        }
    }

    if (!(q > 0.0 && q < 1.0)) {
        throw NoRootInUnitInterval("root collapsed onto the interval boundary");
    }
    return {q, rate_from_q(q, contract.periods_per_year())};
}

double rate_from_q(double q, std::int64_t periods_per_year) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("discount factor must lie in (0, 1)");
    }
    if (periods_per_year < 1) {
        throw DomainError("periods per year must be at least 1");
    }
    // q - 1 is exact for q in [0.5, 1), which is where rates live.
    return -static_cast<double>(periods_per_year) * std::log1p(q - 1.0);
}

double q_from_rate(double rate, std::int64_t periods_per_year) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw DomainError("annual rate must be positive and finite");
    }
    if (periods_per_year < 1) {
        throw DomainError("periods per year must be at least 1");
    }
    return std::exp(-rate / static_cast<double>(periods_per_year));
}

}  // namespace microrate
