#include "microrate/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "microrate/errors.hpp"

namespace microrate {

double SummaryStats::skewness_or_throw() const {
    if (!skewness) {
        throw DegenerateSample("skewness undefined for a zero-variance sample");
    }
    return *skewness;
}

double SummaryStats::kurtosis_or_throw() const {
    if (!kurtosis) {
        throw DegenerateSample("kurtosis undefined for a zero-variance sample");
    }
    return *kurtosis;
}

SummaryStats summary_stats(std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("summary_stats needs at least one sample");
    }
    SummaryStats s;
    s.count = static_cast<std::int64_t>(samples.size());
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    s.min = *lo;
    s.max = *hi;
    if (s.min == s.max) {
        s.mean = s.min;
        return s;
    }

    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) {
        sum += x;
    }
    s.mean = std::clamp(sum / n, s.min, s.max);

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : samples) {
        const double d = x - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.std_dev = std::sqrt(m2);
    if (m2 > 0.0) {
        s.skewness = m3 / (m2 * std::sqrt(m2));
        s.kurtosis = m4 / (m2 * m2);
    }
    return s;
}

std::size_t Histogram::bin_index(double x) const noexcept {
    const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), x);
    const auto idx = std::distance(bin_edges.begin(), it) - 1;
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(counts.size()) - 1));
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins) {
    if (samples.empty()) {
        throw std::invalid_argument("histogram needs at least one sample");
    }
    if (bins < 1) {
        throw std::invalid_argument("histogram needs at least one bin");
    }
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it;
    double hi = *hi_it;
    // Too narrow a range would give repeated edges; widen around the centre.
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const double min_span =
        static_cast<double>(bins) * 16.0 * std::numeric_limits<double>::epsilon() * scale;
    if (hi - lo <= min_span) {
        const double centre = 0.5 * (lo + hi);
        const double half = std::max(scale * 1e-6, 1e-12);
        lo = std::min(lo, centre - half);
        hi = std::max(hi, centre + half);
    }

    Histogram h;
    h.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        h.bin_edges[i] = lo + static_cast<double>(i) * width;
    }
    h.bin_edges[bins] = hi;
    h.counts.assign(bins, 0);
    for (double x : samples) {
        ++h.counts[h.bin_index(x)];
    }
    return h;
}

}  // namespace microrate
