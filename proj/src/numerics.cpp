#include "mfdea/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace mfdea::num {

double kahan_sum(std::span<const double> xs) {
    KahanSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw data_error("mean of empty sample");
    return kahan_sum(xs) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) throw data_error("sample sd needs at least two values");
    const double m = mean(xs);
    KahanSum ss;
    for (double x : xs) ss.add((x - m) * (x - m));
    return std::sqrt(ss.value() / static_cast<double>(n - 1));
}

double quantile_type7(std::span<const double> xs, double p) {
    if (xs.empty()) throw data_error("quantile of empty sample");
    if (p < 0.0 || p > 1.0) throw data_error("quantile probability out of [0,1]");
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    const double h = (static_cast<double>(s.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= s.size()) return s.back();
    const double frac = h - static_cast<double>(lo);
    return s[lo] + frac * (s[lo + 1] - s[lo]);
}

double interquartile_range(std::span<const double> xs) {
    return quantile_type7(xs, 0.75) - quantile_type7(xs, 0.25);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw numeric_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw numeric_error("reg_inc_beta: bad shape");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                            std::lgamma(b) + a * std::log(x) +
                            b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_quantile(double p, int dof) {
    if (dof < 1) throw numeric_error("student_t_quantile: dof must be >= 1");
    if (p <= 0.0 || p >= 1.0) throw numeric_error("student_t_quantile: p in (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -student_t_quantile(1.0 - p, dof);
    const double nu = static_cast<double>(dof);
    const auto cdf = [nu](double t) {
        const double x = nu / (nu + t * t);
        return 1.0 - 0.5 * reg_inc_beta(0.5 * nu, 0.5, x);
    };
    double lo = 0.0, hi = 1.0;
    while (cdf(hi) < p && hi < 1e12) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double logsumexp(std::span<const double> xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    KahanSum acc;
    for (double x : xs) acc.add(std::exp(x - m));
    return m + std::log(acc.value());
}

}  // namespace mfdea::num
