#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "microrate/stochastic.hpp"
#include "microrate/statistics.hpp"

namespace microrate::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kIo = 3,
};

/// Parses `args` (without the program name) and runs one subcommand:
/// solve, actuarial, simulate or approx. JSON goes to `out`, diagnostics to
/// `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// File writers shared with the tests.
void write_samples_csv(std::ostream& os, const std::vector<double>& samples);
void write_histogram_csv(std::ostream& os, const Histogram& histogram);

/// Long-form CSV `curve,x,q,value` with curves phi (over q in [0, 1.01]),
/// phi_blowup and psi (over x in [-2 x+, x+], q = 1 + x/N).
void write_curves_csv(std::ostream& os, double a, std::int64_t num_payments, double x_plus);

}  // namespace microrate::cli
