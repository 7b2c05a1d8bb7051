#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace microrate {

/// Moment summary of a sample. Central moments use the biased (divide by n)
/// estimators; kurtosis is raw m4/m2^2, so a Gaussian scores 3.
struct SummaryStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    std::optional<double> skewness;  ///< empty when the sample has zero variance
    std::optional<double> kurtosis;
    double min = 0.0;
    double max = 0.0;

    bool degenerate() const noexcept { return !kurtosis.has_value(); }

    /// Throws DegenerateSample when the higher moments are undefined.
    double skewness_or_throw() const;
    double kurtosis_or_throw() const;
};

/// Throws std::invalid_argument for an empty sample. A constant sample is
/// reported with std_dev == 0 and empty skewness/kurtosis.
SummaryStats summary_stats(std::span<const double> samples);

/// B equal-width bins over [min, max]. Bins are right-open except the last,
/// which is closed, so every sample lands in exactly one bin.
struct Histogram {
    std::vector<double> bin_edges;     ///< B + 1, strictly increasing
    std::vector<std::int64_t> counts;  ///< B

    std::size_t bins() const noexcept { return counts.size(); }
    std::size_t bin_index(double x) const noexcept;
};

/// Throws std::invalid_argument if samples is empty or bins < 1. A constant
/// sample gets a narrow window centred on the value.
Histogram make_histogram(std::span<const double> samples, std::size_t bins);

}  // namespace microrate
