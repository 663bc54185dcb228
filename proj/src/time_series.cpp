#include "mfdea/time_series.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

namespace mfdea {

TimeSeries::TimeSeries(std::vector<double> values, double lag)
    : values_(std::move(values)), lag_(lag) {
    if (values_.empty()) throw data_error("time series must not be empty");
    if (!(lag_ > 0.0)) throw data_error("time series lag must be positive");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw data_error("non-finite value at position " +
                             std::to_string(i));
        }
    }
}

ScaleSet::ScaleSet(std::vector<std::int64_t> scales)
    : scales_(std::move(scales)) {
    if (scales_.empty()) throw data_error("scale set must not be empty");
    std::int64_t prev = 1;
    for (std::int64_t s : scales_) {
        if (s < 2) throw data_error("scales must be >= 2");
        if (s <= prev) throw data_error("scales must be strictly increasing");
        prev = s;
    }
}

void ScaleSet::validate_for(std::size_t n) const {
    if (static_cast<std::uint64_t>(scales_.back()) > n - 1) {
        throw data_error("scale " + std::to_string(scales_.back()) +
                         " exceeds N-1 = " + std::to_string(n - 1));
    }
}

ScaleSet default_scales(std::size_t n) {
    if (n < kMinSeriesLength) {
        throw data_error("not enough data: need at least " +
                         std::to_string(kMinSeriesLength) + " points, got " +
                         std::to_string(n));
    }
    const int top = std::bit_width(n) - 1;  // floor(log2 n)
    std::vector<std::int64_t> scales;
    for (int i = 2; i <= top - 3; ++i) scales.push_back(std::int64_t{1} << i);
    return ScaleSet(std::move(scales));
}

FluctuationEnsemble::FluctuationEnsemble(std::vector<ScaleFluctuations> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) throw data_error("fluctuation ensemble is empty");
    for (const auto& e : entries_) {
        for (double v : e.sums) {
            if (!std::isfinite(v)) {
                throw data_error("non-finite window sum at scale " +
                                 std::to_string(e.scale));
            }
        }
    }
}

std::vector<double> window_sums(const TimeSeries& series, std::int64_t scale,
                                Convention convention) {
    const auto& x = series.values();
    const std::size_t n = x.size();
    if (scale < 1 || static_cast<std::uint64_t>(scale) > n) {
        throw data_error("invalid scale " + std::to_string(scale) +
                         " for series of length " + std::to_string(n));
    }
    const std::size_t s = static_cast<std::size_t>(scale);
    std::size_t count = n - s + 1;
    if (convention == Convention::compat_r) {
        if (count == 1) {
            throw data_error("scale " + std::to_string(scale) +
                             " leaves no window in compat mode");
        }
        --count;
    }
    std::vector<double> sums(count);
    // Each window is summed afresh, left to right, so results match a
    // brute-force re-summation bit for bit.
    for (std::size_t k = 0; k < count; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < s; ++j) acc += x[k + j];
        sums[k] = acc;
    }
    return sums;
}

FluctuationEnsemble collect_fluctuations(const TimeSeries& series,
                                         const ScaleSet& scales,
                                         Convention convention) {
    scales.validate_for(series.size());
    std::vector<ScaleFluctuations> entries;
    entries.reserve(scales.size());
    for (std::int64_t s : scales.scales()) {
        entries.push_back({s, window_sums(series, s, convention)});
    }
    return FluctuationEnsemble(std::move(entries));
}

TimeSeries log_returns(const TimeSeries& prices) {
    const auto& p = prices.values();
    if (p.size() < 2) throw data_error("log returns need at least two prices");
    std::vector<double> r(p.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) {
            throw data_error("non-positive price at position " +
                             std::to_string(i));
        }
    }
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = std::log(p[i] / p[i - 1]);
    return TimeSeries(std::move(r), prices.lag());
}

}  // namespace mfdea
