#include "microrate/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "microrate/asymptotic.hpp"
#include "microrate/errors.hpp"
#include "microrate/loan.hpp"

namespace microrate::cli {

namespace {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ContractFlags {
    double principal = 1000.0;
    double installment = 22.0;
    std::int64_t payments = 50;
    std::int64_t periods_per_year = 52;

    void attach(CLI::App& app) {
        app.add_option("--principal", principal, "Amount lent")->capture_default_str();
        app.add_option("--installment", installment, "Amount repaid each period")
            ->capture_default_str();
        app.add_option("--payments", payments, "Number of installments N")
            ->capture_default_str();
        app.add_option("--periods-per-year", periods_per_year, "Installment periods per year m")
            ->capture_default_str();
    }

    LoanContract contract() const {
        return LoanContract(principal, installment, payments, periods_per_year);
    }
};

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    return os;
}

void finish_output(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) {
        throw IoError("failed writing '" + path + "'");
    }
}

Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

void write_samples_csv(std::ostream& os, const std::vector<double>& samples) {
    os << "trial,R\n";
    for (std::size_t t = 0; t < samples.size(); ++t) {
        os << t << ',' << format_g17(samples[t]) << '\n';
    }
}

void write_histogram_csv(std::ostream& os, const Histogram& histogram) {
    os << "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < histogram.bins(); ++i) {
        os << format_g17(histogram.bin_edges[i]) << ',' << format_g17(histogram.bin_edges[i + 1])
           << ',' << histogram.counts[i] << '\n';
    }
}

void write_curves_csv(std::ostream& os, double a, std::int64_t num_payments, double x_plus) {
    const NominalInterestFraction fraction(a);
    const double n = static_cast<double>(num_payments);
    os << "curve,x,q,value\n";
    auto row = [&](const char* curve, double x, double q, double value) {
        os << curve << ',' << format_g17(x) << ',' << format_g17(q) << ',' << format_g17(value)
           << '\n';
    };

    constexpr int kPhiPoints = 202;
    for (int i = 0; i < kPhiPoints; ++i) {
        const double q = 1.01 * static_cast<double>(i) / (kPhiPoints - 1);
        row("phi", n * (q - 1.0), q, phi_eval(fraction, num_payments, q));
    }

    constexpr int kBlowupPoints = 121;
    const double x_lo = -2.0 * x_plus;
    const double x_hi = x_plus;
    for (int i = 0; i < kBlowupPoints; ++i) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / (kBlowupPoints - 1);
        const double q = 1.0 + x / n;
        row("phi_blowup", x, q, phi_eval(fraction, num_payments, q));
    }
    for (int i = 0; i < kBlowupPoints; ++i) {
        const double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) / (kBlowupPoints - 1);
        row("psi", x, 1.0 + x / n, psi_eval(a, x));
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Effective interest rates of microcredit contracts", "microrate"};
    app.require_subcommand(1);

    double tol = kDefaultTolerance;
    double p = 0.95;
    std::int64_t trials = 100'000;
    std::uint64_t seed = 42;
    std::int64_t bins = 60;
    unsigned threads = 1;
    double a = 0.1;
    std::string out_samples;
    std::string out_histogram;
    std::string out_curves;

    ContractFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "Deterministic effective rate of a contract");
    solve_flags.attach(*solve);
    solve->add_option("--tol", tol, "Root tolerance on q")->capture_default_str();

    ContractFlags actuarial_flags;
    auto* actuarial =
        app.add_subcommand("actuarial", "Actuarial expected rate under geometric delays");
    actuarial_flags.attach(*actuarial);
    actuarial->add_option("--p", p, "Probability of paying on time each period")
        ->capture_default_str();
    actuarial->add_option("--tol", tol, "Root tolerance on q")->capture_default_str();

    ContractFlags simulate_flags;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo distribution of the realized rate");
    simulate_flags.attach(*simulate);
    simulate->add_option("--p", p, "Probability of paying on time each period")
        ->capture_default_str();
    simulate->add_option("--trials", trials, "Number of simulated repayment paths")
        ->capture_default_str();
    simulate->add_option("--seed", seed, "Base seed of the per-trial streams")
        ->capture_default_str();
    simulate->add_option("--bins", bins, "Histogram bins")->capture_default_str();
    simulate->add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    simulate->add_option("--tol", tol, "Root tolerance on R")->capture_default_str();
    simulate->add_option("--out-samples", out_samples, "Samples CSV path");
    simulate->add_option("--out-histogram", out_histogram, "Histogram CSV path");

    std::int64_t approx_payments = 50;
    std::int64_t approx_periods = 52;
    auto* approx = app.add_subcommand("approx", "Large-N approximation of the root and rate");
    approx->add_option("--a", a, "Nominal interest fraction")->capture_default_str();
    approx->add_option("--payments", approx_payments, "Number of installments N")
        ->capture_default_str();
    approx->add_option("--periods-per-year", approx_periods, "Installment periods per year m")
        ->capture_default_str();
    approx->add_option("--p", p, "Probability of paying on time each period")
        ->capture_default_str();
    approx->add_option("--tol", tol, "Root tolerance")->capture_default_str();
    approx->add_option("--out-curves", out_curves, "CSV of phi and its blow-up");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        Json j;
        if (*solve) {
            const LoanContract contract = solve_flags.contract();
            const RateSolution sol = solve_q_plus(contract, tol);
            j["q_plus"] = sol.q_plus;
            j["annual_rate"] = sol.annual_rate;
            j["nominal_fraction_a"] = contract.nominal_fraction().value();
        } else if (*actuarial) {
            const LoanContract contract = actuarial_flags.contract();
            const DelayModel delays(p);
            const RateSolution sol = solve_q_plus(contract, tol);
            j["q_plus"] = sol.q_plus;
            j["deterministic_rate"] = sol.annual_rate;
            j["actuarial_rate"] = actuarial_rate(contract, delays, tol);
            j["p"] = p;
        } else if (*simulate) {
            if (bins < 1) {
                throw std::invalid_argument("--bins must be at least 1");
            }
            SimulationConfig config{
                .contract = simulate_flags.contract(),
                .delay_model = DelayModel(p),
                .num_trials = trials,
                .seed = seed,
                .solver_tol = tol,
                .histogram_bins = static_cast<std::size_t>(bins),
            };
            config.validate();

            std::ofstream samples_os;
            std::ofstream histogram_os;
            if (!out_samples.empty()) {
                samples_os = open_output(out_samples);
            }
            if (!out_histogram.empty()) {
                histogram_os = open_output(out_histogram);
            }

            const SimulationResult result = run_simulation(config, threads);

            if (!out_samples.empty()) {
                write_samples_csv(samples_os, result.samples);
                finish_output(samples_os, out_samples);
            }
            if (!out_histogram.empty()) {
                write_histogram_csv(histogram_os, result.histogram);
                finish_output(histogram_os, out_histogram);
            }

            const SummaryStats& s = result.stats;
            j["mean"] = s.mean;
            j["std_dev"] = s.std_dev;
            j["skewness"] = optional_number(s.skewness);
            j["kurtosis"] = optional_number(s.kurtosis);
            j["min"] = s.min;
            j["max"] = s.max;
            j["actuarial_rate"] = result.actuarial_rate;
            j["deterministic_rate"] = result.deterministic_rate;
            j["p"] = p;
            j["trials"] = trials;
            j["seed"] = seed;
            if (s.degenerate()) {
                err << "note: zero-variance sample, skewness and kurtosis undefined\n";
            }
        } else if (*approx) {
            const AsymptoticSolution sol = solve_asymptotic(a, approx_payments, approx_periods, p, tol);
            const RateSolution exact =
                solve_q_plus(contract_for(a, approx_payments, 1000.0, approx_periods), tol);
            std::ofstream curves_os;
            if (!out_curves.empty()) {
                curves_os = open_output(out_curves);
                write_curves_csv(curves_os, a, approx_payments, sol.x_plus);
                finish_output(curves_os, out_curves);
            }
            j["x_plus"] = sol.x_plus;
            j["q_plus_approx"] = sol.q_plus_approx;
            j["q_plus_exact"] = exact.q_plus;
            j["abs_error"] = std::abs(sol.q_plus_approx - exact.q_plus);
            j["actuarial_rate_approx"] = sol.actuarial_rate_approx;
        }
        out << j.dump(2) << '\n';
        return kOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace microrate::cli
