#include "mfdea/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfdea/numerics.hpp"

namespace mfdea {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RhoValue rho_factor(double q, double margin) {
    if (!std::isfinite(q)) throw data_error("rho_factor: q must be finite");
    if (q <= 0.5 + margin) return {1.0, true};
    return {std::sqrt(q) / std::pow(2.0 * q - 1.0, 1.0 / 6.0), false};
}

double amise_gaussian(double h, double q, double sigma, std::size_t n) {
    if (!(h > 0.0)) throw data_error("amise_gaussian: h must be positive");
    if (!(sigma > 0.0)) throw data_error("amise_gaussian: sigma must be positive");
    if (n == 0) throw data_error("amise_gaussian: n must be positive");
    if (!(q > 0.5)) {
        throw numeric_error(
            "amise_gaussian: divergent integral for q <= 1/2 (unbounded support)");
    }
    const double nn = static_cast<double>(n);
    const double variance_term = q * q * std::pow(2.0 * M_PI, 1.0 - q) *
                                 std::pow(sigma * sigma, 1.0 - q) /
                                 (nn * h * std::sqrt(2.0 * q - 1.0));
    const double bias_term = (h * h / 12.0) * std::sqrt(q) *
                             std::pow(2.0, -(1.0 + q)) *
                             std::pow(M_PI, 0.5 - q) *
                             std::pow(sigma, -(1.0 + 2.0 * q));
    return variance_term + bias_term;
}

BinWidth optimal_width_gaussian(double sigma, std::size_t n, double q,
                                double margin) {
    if (!(sigma > 0.0)) throw data_error("optimal_width_gaussian: sigma must be positive");
    if (n == 0) throw data_error("optimal_width_gaussian: n must be positive");
    const RhoValue r = rho_factor(q, margin);
    const double h1 = sigma * std::pow(static_cast<double>(n), -1.0 / 3.0) *
                      std::cbrt(24.0 * std::sqrt(M_PI));
    return {h1 * r.value, r.clamped};
}

BinWidth scott_bin_width(double sigma, std::size_t n, double q, double margin) {
    if (!(sigma > 0.0)) throw data_error("scott rule: degenerate ensemble (sigma <= 0)");
    if (n == 0) throw data_error("scott rule: n must be positive");
    const RhoValue r = rho_factor(q, margin);
    return {3.5 * sigma * std::pow(static_cast<double>(n), -1.0 / 3.0) * r.value,
            r.clamped};
}

BinWidth freedman_diaconis_bin_width(double iqr, std::size_t n, double q,
                                     double margin) {
    if (!(iqr > 0.0)) throw data_error("fd rule: degenerate ensemble (IQR <= 0)");
    if (n == 0) throw data_error("fd rule: n must be positive");
    const RhoValue r = rho_factor(q, margin);
    return {2.6 * iqr * std::pow(static_cast<double>(n), -1.0 / 3.0) * r.value,
            r.clamped};
}

std::size_t sturges_bins(std::size_t n) {
    if (n == 0) throw data_error("sturges_bins: n must be positive");
    return static_cast<std::size_t>(
        std::ceil(1.0 + std::log2(static_cast<double>(n))));
}

EnsembleStats compute_stats(const FluctuationEnsemble& ensemble) {
    EnsembleStats stats;
    stats.per_scale.reserve(ensemble.size());
    for (const auto& e : ensemble.entries()) {
        if (e.sums.size() < 2) {
            throw data_error("scale " + std::to_string(e.scale) +
                             " has fewer than two windows");
        }
        const auto [lo, hi] = std::minmax_element(e.sums.begin(), e.sums.end());
        stats.per_scale.push_back({e.scale, num::sample_sd(e.sums),
                                   num::interquartile_range(e.sums),
                                   e.sums.size(), *lo, *hi});
    }
    return stats;
}

namespace {

// cbrt( sum_i spread_i^{2(1-q)}/N_i / sum_i spread_i^{-(1+2q)} ), evaluated in
// log space; q far from 1 drives the spread powers across the double range.
double tamise_mix(const EnsembleStats& stats, double q,
                  double ScaleStats::* spread, const char* rule) {
    if (stats.per_scale.empty()) throw data_error("empty ensemble stats");
    std::vector<double> log_num, log_den;
    log_num.reserve(stats.per_scale.size());
    log_den.reserve(stats.per_scale.size());
    for (const auto& s : stats.per_scale) {
        const double spr = s.*spread;
        if (!(spr > 0.0)) {
            throw data_error(std::string(rule) +
                             " rule: degenerate ensemble at scale " +
                             std::to_string(s.scale));
        }
        const double ls = std::log(spr);
        log_num.push_back(2.0 * (1.0 - q) * ls -
                          std::log(static_cast<double>(s.count)));
        log_den.push_back(-(1.0 + 2.0 * q) * ls);
    }
    return std::exp((num::logsumexp(log_num) - num::logsumexp(log_den)) / 3.0);
}

}  // namespace

BinWidth scott_bin_width(const EnsembleStats& stats, double q, double margin) {
    const RhoValue r = rho_factor(q, margin);
    return {3.5 * r.value * tamise_mix(stats, q, &ScaleStats::sigma, "scott"),
            r.clamped};
}

BinWidth freedman_diaconis_bin_width(const EnsembleStats& stats, double q,
                                     double margin) {
    const RhoValue r = rho_factor(q, margin);
    return {2.6 * r.value * tamise_mix(stats, q, &ScaleStats::iqr, "fd"),
            r.clamped};
}

Histogram::Histogram(double origin, double width,
                     std::vector<std::size_t> counts, std::size_t total)
    : origin_(origin), width_(width), counts_(std::move(counts)), total_(total) {}

Histogram Histogram::build(std::span<const double> data, double h,
                           Convention convention) {
    if (data.empty()) throw data_error("histogram of empty data");
    if (!(h > 0.0)) throw data_error("histogram bin width must be positive");
    double lo = data[0], hi = data[0];
    for (double x : data) {
        if (!std::isfinite(x)) throw data_error("histogram of non-finite data");
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double range = hi - lo;
    if (range / h > 5e8) {
        throw numeric_error("bin width " + std::to_string(h) +
                            " is too small for data range " +
                            std::to_string(range));
    }
    std::size_t n_bins;
    if (convention == Convention::compat_r) {
        n_bins = static_cast<std::size_t>(std::floor(range / h)) + 1;
    } else {
        n_bins = static_cast<std::size_t>(std::ceil(range / h));
        if (n_bins == 0) n_bins = 1;  // zero range: everything in one bin
    }
    std::vector<std::size_t> counts(n_bins, 0);
    for (double x : data) {
        // Half-open bins [lo + i h, lo + (i+1) h); the final bin is closed so
        // the maximum lands inside.
        double idx = std::floor((x - lo) / h);
        if (idx < 0.0) idx = 0.0;
        std::size_t i = static_cast<std::size_t>(idx);
        if (i >= n_bins) i = n_bins - 1;
        ++counts[i];
    }
    return Histogram(lo, h, std::move(counts), data.size());
}

std::vector<double> Histogram::probabilities() const {
    std::vector<double> p(counts_.size());
    const double n = static_cast<double>(total_);
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        p[i] = static_cast<double>(counts_[i]) / n;
    }
    return p;
}

BinWidthRule BinWidthRule::fixed(double h) {
    if (!(h > 0.0)) throw config_error("fixed bin width must be positive");
    return {Kind::fixed, h};
}

BinWidthRule BinWidthRule::parse(const std::string& text) {
    if (text == "scott") return scott();
    if (text == "fd") return fd();
    if (text == "scott-single") return scott_one();
    if (text == "sturges") return sturges();
    if (text.rfind("fixed:", 0) == 0) {
        std::size_t pos = 0;
        double h = 0.0;
        const std::string arg = text.substr(6);
        try {
            h = std::stod(arg, &pos);
        } catch (const std::exception&) {
            throw config_error("cannot parse fixed bin width '" + arg + "'");
        }
        if (pos != arg.size()) {
            throw config_error("cannot parse fixed bin width '" + arg + "'");
        }
        return fixed(h);
    }
    throw config_error("unknown bin-width rule '" + text +
                       "' (expected scott|fd|scott-single|sturges|fixed:<h>)");
}

std::string BinWidthRule::name() const {
    switch (kind) {
        case Kind::scott_multi: return "scott";
        case Kind::fd_multi: return "fd";
        case Kind::scott_single: return "scott-single";
        case Kind::sturges: return "sturges";
        case Kind::fixed: return "fixed:" + std::to_string(fixed_h);
    }
    return "?";
}

BinWidth resolve_bin_width(const BinWidthRule& rule, const EnsembleStats& stats,
                           double q, double margin) {
    switch (rule.kind) {
        case BinWidthRule::Kind::fixed:
            return {rule.fixed_h, false};
        case BinWidthRule::Kind::scott_multi:
            return scott_bin_width(stats, q, margin);
        case BinWidthRule::Kind::fd_multi:
            return freedman_diaconis_bin_width(stats, q, margin);
        case BinWidthRule::Kind::scott_single: {
            if (stats.per_scale.empty()) throw data_error("empty ensemble stats");
            const auto& first = stats.per_scale.front();
            return scott_bin_width(first.sigma, first.count, q, margin);
        }
        case BinWidthRule::Kind::sturges: {
            if (stats.per_scale.empty()) throw data_error("empty ensemble stats");
            double lo = kInf, hi = -kInf;
            std::size_t total = 0;
            for (const auto& s : stats.per_scale) {
                lo = std::min(lo, s.min);
                hi = std::max(hi, s.max);
                total += s.count;
            }
            if (!(hi > lo)) {
                throw data_error("sturges rule: degenerate ensemble (zero range)");
            }
            return {(hi - lo) / static_cast<double>(sturges_bins(total)), false};
        }
    }
    throw config_error("unhandled bin-width rule");
}

namespace {

double renyi_divergence_masses(std::span<const double> p,
                               std::span<const double> p_hat, double q,
                               double tail_mass) {
    if (p.size() != p_hat.size()) {
        throw data_error("renyi_divergence: mass vectors differ in length");
    }
    if (!(q > 0.0)) throw data_error("renyi_divergence: q must be positive");
    for (double v : p)
        if (v < 0.0) throw data_error("renyi_divergence: negative mass in p");
    for (double v : p_hat)
        if (v < 0.0) throw data_error("renyi_divergence: negative mass in p_hat");

    const bool mass_outside = tail_mass > 1e-9;
    if (std::abs(q - 1.0) < 1e-9) {
        // Kullback-Leibler limit.
        if (mass_outside) return kInf;
        num::KahanSum acc;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] == 0.0) continue;
            if (p_hat[i] == 0.0) return kInf;
            acc.add(p[i] * std::log(p[i] / p_hat[i]));
        }
        return acc.value();
    }
    if (q > 1.0 && mass_outside) return kInf;
    num::KahanSum acc;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (p_hat[i] == 0.0) {
            if (q > 1.0) return kInf;
            continue;  // p_hat^{1-q} -> 0 for q < 1
        }
        acc.add(std::pow(p_hat[i], 1.0 - q) * std::pow(p[i], q));
    }
    if (!(acc.value() > 0.0)) return kInf;
    return std::log(acc.value()) / (q - 1.0);
}

}  // namespace

double renyi_divergence(std::span<const double> p, std::span<const double> p_hat,
                        double q) {
    return renyi_divergence_masses(p, p_hat, q, 0.0);
}

double renyi_divergence(const std::function<double(double)>& density,
                        const Histogram& hist, double q) {
    std::vector<double> p(hist.bins());
    num::KahanSum covered;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        const double a = hist.origin() + static_cast<double>(i) * hist.width();
        const double b = a + hist.width();
        p[i] = num::integrate(density, a, b, 1e-12, 1e-10);
        if (p[i] < 0.0) p[i] = 0.0;
        covered.add(p[i]);
    }
    const double tail_mass = std::max(0.0, 1.0 - covered.value());
    return renyi_divergence_masses(p, hist.probabilities(), q, tail_mass);
}

}  // namespace mfdea
