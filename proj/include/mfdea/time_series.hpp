#ifndef MFDEA_TIME_SERIES_HPP
#define MFDEA_TIME_SERIES_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mfdea/common.hpp"

namespace mfdea {

// Minimum series length for spectrum estimation; below this the default
// geometric scale set is empty or trivial and the pipeline refuses the data.
inline constexpr std::size_t kMinSeriesLength = 128;

// Uniformly lagged real-valued sequence. `lag` is metadata only (the physical
// spacing of consecutive samples, e.g. one trading day).
class TimeSeries {
  public:
    explicit TimeSeries(std::vector<double> values, double lag = 1.0);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double lag() const { return lag_; }

  private:
    std::vector<double> values_;
    double lag_;
};

// Strictly increasing window lengths (in lag units), all >= 2.
class ScaleSet {
  public:
    explicit ScaleSet(std::vector<std::int64_t> scales);

    const std::vector<std::int64_t>& scales() const { return scales_; }
    std::size_t size() const { return scales_.size(); }

    // Every scale must leave at least one window: max(scale) <= n-1.
    void validate_for(std::size_t n) const;

  private:
    std::vector<std::int64_t> scales_;
};

// Geometric default: {2^i : i = 2 .. floor(log2 n) - 3}. Requires n >= 128.
ScaleSet default_scales(std::size_t n);

struct ScaleFluctuations {
    std::int64_t scale;
    std::vector<double> sums;  // mobile-window sums at this scale
};

// Per-scale ensembles of diffusion-trajectory endpoints.
class FluctuationEnsemble {
  public:
    explicit FluctuationEnsemble(std::vector<ScaleFluctuations> entries);

    const std::vector<ScaleFluctuations>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::vector<ScaleFluctuations> entries_;
};

// All mobile-window sums of length `scale`: N-scale+1 of them, or N-scale in
// compat mode (the legacy implementation drops the final window).
std::vector<double> window_sums(const TimeSeries& series, std::int64_t scale,
                                Convention convention = Convention::paper);

FluctuationEnsemble collect_fluctuations(const TimeSeries& series,
                                         const ScaleSet& scales,
                                         Convention convention = Convention::paper);

// r_t = ln(P_t / P_{t-1}); requires strictly positive prices.
TimeSeries log_returns(const TimeSeries& prices);

}  // namespace mfdea

#endif
