#ifndef MFDEA_NUMERICS_HPP
#define MFDEA_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mfdea/common.hpp"

namespace mfdea::num {

// ---------------------------------------------------------------------------
// Compensated summation
// ---------------------------------------------------------------------------

class KahanSum {
  public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double kahan_sum(std::span<const double> xs);

// ---------------------------------------------------------------------------
// Quadrature: 15-point Gauss-Kronrod panel plus a recursive adaptive driver
// ---------------------------------------------------------------------------

// Kronrod abscissae on [0,1] (symmetric about the midpoint) and weights;
// odd-index abscissae carry the embedded 7-point Gauss rule.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
    double value;
    double error;  // |K15 - G7|, a conservative estimate of the K15 error
};

template <class F>
PanelResult gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(mid);
    double k = kGk15Weights[7] * fc;
    double g = kG7Weights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = hl * kGk15Nodes[i];
        const double fs = f(mid - dx) + f(mid + dx);
        k += kGk15Weights[i] * fs;
        if (i % 2 == 1) g += kG7Weights[(i - 1) / 2] * fs;
    }
    return {k * hl, std::abs(k - g) * hl};
}

namespace detail {

// `floor` is an absolute error level below machine precision of the whole
// integral; without it, endpoint cusps (e.g. k^mu near 0) drive the halved
// per-level tolerance past what any subdivision can certify.
template <class F>
double integrate_rec(F& f, double a, double b, PanelResult whole, double tol,
                     double floor, int depth) {
    if (whole.error <= std::max(tol, floor) || depth <= 0) {
        if (depth <= 0 && whole.error > std::max(1e3 * tol, floor)) {
            throw numeric_error(
                "adaptive quadrature failed to converge on [" +
                std::to_string(a) + ", " + std::to_string(b) +
                "]: err=" + std::to_string(whole.error));
        }
        return whole.value;
    }
    const double mid = 0.5 * (a + b);
    const PanelResult left = gk15(f, a, mid);
    const PanelResult right = gk15(f, mid, b);
    return integrate_rec(f, a, mid, left, 0.5 * tol, floor, depth - 1) +
           integrate_rec(f, mid, b, right, 0.5 * tol, floor, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                 double rel_tol = 1e-10, int max_depth = 48) {
    const PanelResult whole = gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole.value));
    const double floor = 1e-16 * std::abs(whole.value);
    return detail::integrate_rec(f, a, b, whole, tol, floor, max_depth);
}

// Golden-section search for the minimum of a unimodal function on [lo, hi].
template <class F>
double golden_minimize(F&& f, double lo, double hi, double tol = 1e-10) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 300 && (b - a) > tol * (std::abs(a) + std::abs(b) + 1e-300); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

double mean(std::span<const double> xs);
// Sample standard deviation (N-1 denominator).
double sample_sd(std::span<const double> xs);
// Linear-interpolation quantile, R type 7 (the default of most environments).
double quantile_type7(std::span<const double> xs, double p);
double interquartile_range(std::span<const double> xs);

// ---------------------------------------------------------------------------
// Special functions needed for confidence intervals
// ---------------------------------------------------------------------------

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_inc_beta(double a, double b, double x);
// Student-t quantile: smallest t with P(T_dof <= t) = p.
double student_t_quantile(double p, int dof);

double logsumexp(std::span<const double> xs);

// ---------------------------------------------------------------------------
// Deterministic random draws
// ---------------------------------------------------------------------------

// mt19937_64 is fully specified by the standard, and the transforms below are
// hand-rolled, so a seed pins the stream across platforms and library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }
    // (0, 1]
    double uniform_pos() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1p-53;
    }
    // Standard normal via Box-Muller.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * M_PI * uniform();
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace mfdea::num

#endif
