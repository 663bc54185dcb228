#ifndef MFDEA_HISTOGRAM_HPP
#define MFDEA_HISTOGRAM_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mfdea/common.hpp"
#include "mfdea/time_series.hpp"

namespace mfdea {

// Margin eps_q of the q-correction factor: the exact formula is used for
// q > 0.5 + eps_q and the clamped fallback rho = 1 below that. The formula
// diverges at q -> 1/2+ and has no meaning for q <= 1/2 on unbounded support.
inline constexpr double kDefaultRhoMargin = 0.05;

struct RhoValue {
    double value;
    bool clamped;  // true when the fallback rho = 1 was substituted
};

// q-correction factor q^{1/2} / (2q-1)^{1/6} applied to the classic bin-width
// rules; equals 1 at q = 1 and grows as q^{1/3} for large q.
RhoValue rho_factor(double q, double margin = kDefaultRhoMargin);

// Asymptotic mean integrated squared error between the q-th power of a
// histogram and the q-th power of a normal density with the given sigma:
//   variance term  q^2 (2 pi)^{1-q} sigma^{2(1-q)} / (N h sqrt(2q-1))
//   bias term      (h^2/12) sqrt(q) 2^{-(1+q)} pi^{1/2-q} sigma^{-(1+2q)}
// Defined for q > 1/2 only; at q = 1/2 the underlying integral becomes the
// measure of the support and diverges.
double amise_gaussian(double h, double q, double sigma, std::size_t n);

struct BinWidth {
    double h;
    bool rho_clamped;
};

// Exact AMISE minimizer for normal data: sigma N^{-1/3} (24 sqrt(pi))^{1/3} rho_q.
BinWidth optimal_width_gaussian(double sigma, std::size_t n, double q,
                                double margin = kDefaultRhoMargin);
// Classic practical rules with the empirical spread plugged in.
BinWidth scott_bin_width(double sigma, std::size_t n, double q,
                         double margin = kDefaultRhoMargin);
BinWidth freedman_diaconis_bin_width(double iqr, std::size_t n, double q,
                                     double margin = kDefaultRhoMargin);

// ceil(1 + log2 n) bins; a visualization-oriented baseline.
std::size_t sturges_bins(std::size_t n);

struct ScaleStats {
    std::int64_t scale;
    double sigma;  // sample standard deviation (N-1)
    double iqr;    // type-7 interquartile range
    std::size_t count;
    double min;
    double max;
};

struct EnsembleStats {
    std::vector<ScaleStats> per_scale;
};

EnsembleStats compute_stats(const FluctuationEnsemble& ensemble);

// Shared bin width minimizing the total AMISE across all scales' histograms:
//   h = C rho_q cbrt( sum_i spread_i^{2(1-q)}/N_i / sum_i spread_i^{-(1+2q)} )
// with C = 3.5 and the sigma spread (Scott) or C = 2.6 and the IQR spread
// (Freedman-Diaconis). Reduces exactly to the single-histogram rule at m = 1.
BinWidth scott_bin_width(const EnsembleStats& stats, double q,
                         double margin = kDefaultRhoMargin);
BinWidth freedman_diaconis_bin_width(const EnsembleStats& stats, double q,
                                     double margin = kDefaultRhoMargin);

// Equidistant-bin count structure over [origin, origin + bins*width].
class Histogram {
  public:
    static Histogram build(std::span<const double> data, double h,
                           Convention convention = Convention::paper);

    double origin() const { return origin_; }
    double width() const { return width_; }
    std::size_t bins() const { return counts_.size(); }
    const std::vector<std::size_t>& counts() const { return counts_; }
    std::size_t total() const { return total_; }

    // Normalized bin probabilities; they sum to 1 up to a few ulp.
    std::vector<double> probabilities() const;

  private:
    Histogram(double origin, double width, std::vector<std::size_t> counts,
              std::size_t total);

    double origin_;
    double width_;
    std::vector<std::size_t> counts_;
    std::size_t total_;
};

// How the shared per-q bin width is chosen for the entropy surface.
struct BinWidthRule {
    enum class Kind {
        scott_multi,    // total-AMISE Scott rule over all scales
        fd_multi,       // total-AMISE Freedman-Diaconis rule
        scott_single,   // Scott rule from the smallest scale only
        sturges,        // pooled range / ceil(1 + log2(total count)), q-free
        fixed,          // user-supplied width
    };

    Kind kind = Kind::scott_multi;
    double fixed_h = 0.0;

    static BinWidthRule scott() { return {Kind::scott_multi, 0.0}; }
    static BinWidthRule fd() { return {Kind::fd_multi, 0.0}; }
    static BinWidthRule scott_one() { return {Kind::scott_single, 0.0}; }
    static BinWidthRule sturges() { return {Kind::sturges, 0.0}; }
    static BinWidthRule fixed(double h);
    // Accepts "scott" | "fd" | "scott-single" | "sturges" | "fixed:<h>".
    static BinWidthRule parse(const std::string& text);
    std::string name() const;
};

BinWidth resolve_bin_width(const BinWidthRule& rule, const EnsembleStats& stats,
                           double q, double margin = kDefaultRhoMargin);

// Renyi information divergence D_q(p||p_hat) between discrete mass vectors:
// (1/(q-1)) ln sum_k p_hat_k^{1-q} p_k^q; the q -> 1 limit is Kullback-Leibler.
// Returns +inf when p has mass where p_hat has none and q >= 1.
double renyi_divergence(std::span<const double> p, std::span<const double> p_hat,
                        double q);

// Same divergence with p an evaluable density integrated over the histogram's
// bins; mass of p outside the covered interval counts as support mismatch.
double renyi_divergence(const std::function<double(double)>& density,
                        const Histogram& hist, double q);

}  // namespace mfdea

#endif
