#ifndef MFDEA_SPECTRUM_HPP
#define MFDEA_SPECTRUM_HPP

#include <span>
#include <vector>

#include "mfdea/common.hpp"
#include "mfdea/histogram.hpp"
#include "mfdea/time_series.hpp"

namespace mfdea {

// Strictly increasing grid of entropy orders q. Negative orders are gated:
// the estimator is an unreliable information measure there.
class QGrid {
  public:
    explicit QGrid(std::vector<double> values, bool allow_negative = false);

    // q_min, q_min + step, ... up to q_max (inclusive within half a step).
    static QGrid linspace(double q_min, double q_max, double step,
                          bool allow_negative = false);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

  private:
    std::vector<double> values_;
};

// Renyi entropy (1/(1-q)) ln sum p_i^q of a probability vector, with the
// Shannon limit taken for |q-1| < 1e-9. Zero-mass entries are excluded
// (0^q := 0 for q > 0); for q < 0 any zero entry makes the entropy infinite.
double renyi_entropy(std::span<const double> probabilities, double q);

// H[q][scale] with one shared bin width per q across all scales.
struct EntropySurface {
    std::vector<double> q_values;
    std::vector<std::int64_t> scales;
    // entropies[qi][si]; NaN marks a missing cell (degenerate scale).
    std::vector<std::vector<double>> entropies;
    std::vector<double> bin_width;    // per q
    std::vector<bool> rho_clamped;    // per q
};

EntropySurface entropy_surface(const FluctuationEnsemble& ensemble,
                               const QGrid& q_grid, const BinWidthRule& rule,
                               Convention convention = Convention::paper,
                               double margin = kDefaultRhoMargin);

// Per-q ordinary least squares of H(q, s) on ln s.
struct SpectrumPoint {
    double q = 0.0;
    double delta = 0.0;      // slope
    double std_error = 0.0;  // standard error of the slope
    double ci_low = 0.0;     // confidence interval, Student-t based
    double ci_high = 0.0;
    double r_squared = 0.0;
    double intercept = 0.0;
    bool valid = false;      // false when fewer than 3 usable scales
};

struct SpectrumResult {
    std::vector<SpectrumPoint> points;
    double ci_level = 0.99;
};

SpectrumResult fit_delta(const EntropySurface& surface, double ci_level = 0.99);

// tau(q) = (q-1) delta(q); alpha = dtau/dq by central finite differences
// (one-sided at the ends); f(alpha) = q alpha - tau; D(q) = delta(q).
struct LegendrePoint {
    double tau = 0.0;
    double alpha = 0.0;
    double f_alpha = 0.0;
    double d_q = 0.0;
};

std::vector<LegendrePoint> legendre_spectrum(const SpectrumResult& result,
                                             const QGrid& q_grid);

}  // namespace mfdea

#endif
