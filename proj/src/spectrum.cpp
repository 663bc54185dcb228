#include "mfdea/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "mfdea/numerics.hpp"

namespace mfdea {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}

QGrid::QGrid(std::vector<double> values, bool allow_negative)
    : values_(std::move(values)) {
    if (values_.empty()) throw config_error("q grid must not be empty");
    double prev = -kInf;
    for (double q : values_) {
        if (!std::isfinite(q)) throw config_error("q grid values must be finite");
        if (q <= prev) throw config_error("q grid must be strictly increasing");
        if (q < 0.0 && !allow_negative) {
            throw config_error(
                "negative q requires the explicit override (allow_negative_q)");
        }
        prev = q;
    }
}

QGrid QGrid::linspace(double q_min, double q_max, double step,
                      bool allow_negative) {
    if (!(step > 0.0)) throw config_error("q step must be positive");
    if (q_min > q_max) throw config_error("q_min must not exceed q_max");
    if ((q_max - q_min) / step > 1e5) {
        throw config_error("q grid would exceed 100000 points");
    }
    std::vector<double> values;
    for (std::size_t k = 0;; ++k) {
        const double q = q_min + static_cast<double>(k) * step;
        if (q > q_max + 0.5 * step) break;
        values.push_back(q);
    }
    return QGrid(std::move(values), allow_negative);
}

double renyi_entropy(std::span<const double> probabilities, double q) {
    if (!std::isfinite(q)) throw data_error("renyi_entropy: q must be finite");
    num::KahanSum total;
    bool has_zero = false;
    for (double p : probabilities) {
        if (p < 0.0) throw data_error("renyi_entropy: negative probability");
        if (p == 0.0) has_zero = true;
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12) {
        throw data_error("renyi_entropy: probabilities must sum to 1");
    }
    if (std::abs(q - 1.0) < 1e-9) {
        num::KahanSum h;
        for (double p : probabilities) {
            if (p > 0.0) h.add(-p * std::log(p));
        }
        return h.value();
    }
    if (q < 0.0 && has_zero) return kInf;
    // sum p^q evaluated through logsumexp: extreme q would otherwise under-
    // or overflow the plain power sum.
    std::vector<double> logs;
    logs.reserve(probabilities.size());
    for (double p : probabilities) {
        if (p > 0.0) logs.push_back(q * std::log(p));
    }
    return num::logsumexp(logs) / (1.0 - q);
}

namespace {

bool is_degenerate(const ScaleFluctuations& e) {
    const auto [lo, hi] = std::minmax_element(e.sums.begin(), e.sums.end());
    return !(*hi > *lo);
}

}  // namespace

EntropySurface entropy_surface(const FluctuationEnsemble& ensemble,
                               const QGrid& q_grid, const BinWidthRule& rule,
                               Convention convention, double margin) {
    const auto& entries = ensemble.entries();
    std::vector<bool> degenerate(entries.size());
    std::vector<ScaleFluctuations> usable;
    for (std::size_t si = 0; si < entries.size(); ++si) {
        degenerate[si] = is_degenerate(entries[si]);
        if (!degenerate[si]) usable.push_back(entries[si]);
    }
    if (usable.empty()) {
        throw data_error("degenerate ensemble: all scales have constant sums");
    }
    // Degenerate scales yield missing cells and are left out of the stats the
    // width rule sees.
    const EnsembleStats stats =
        compute_stats(FluctuationEnsemble(std::move(usable)));

    EntropySurface surface;
    surface.q_values = q_grid.values();
    surface.scales.reserve(entries.size());
    for (const auto& e : entries) surface.scales.push_back(e.scale);
    const std::size_t nq = surface.q_values.size();
    surface.entropies.assign(nq, std::vector<double>(entries.size(), kNaN));
    surface.bin_width.assign(nq, 0.0);
    surface.rho_clamped.assign(nq, false);

    auto compute_q = [&](std::size_t qi) {
        const double q = surface.q_values[qi];
        const BinWidth bw = resolve_bin_width(rule, stats, q, margin);
        surface.bin_width[qi] = bw.h;
        surface.rho_clamped[qi] = bw.rho_clamped;
        for (std::size_t si = 0; si < entries.size(); ++si) {
            if (degenerate[si]) continue;
            const Histogram hist =
                Histogram::build(entries[si].sums, bw.h, convention);
            surface.entropies[qi][si] = renyi_entropy(hist.probabilities(), q);
        }
    };

    const unsigned hw = std::thread::hardware_concurrency();
    if (nq >= 16 && hw > 1) {
        const std::size_t n_jobs = std::min<std::size_t>(hw, 8);
        std::vector<std::future<void>> jobs;
        for (std::size_t j = 0; j < n_jobs; ++j) {
            jobs.push_back(std::async(std::launch::async, [&, j] {
                for (std::size_t qi = j; qi < nq; qi += n_jobs) compute_q(qi);
            }));
        }
        for (auto& job : jobs) job.get();
    } else {
        for (std::size_t qi = 0; qi < nq; ++qi) compute_q(qi);
    }
    return surface;
}

SpectrumResult fit_delta(const EntropySurface& surface, double ci_level) {
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
        throw config_error("confidence level must lie in (0,1)");
    }
    SpectrumResult result;
    result.ci_level = ci_level;
    result.points.reserve(surface.q_values.size());
    for (std::size_t qi = 0; qi < surface.q_values.size(); ++qi) {
        SpectrumPoint pt;
        pt.q = surface.q_values[qi];
        std::vector<double> xs, ys;
        for (std::size_t si = 0; si < surface.scales.size(); ++si) {
            const double h = surface.entropies[qi][si];
            if (!std::isfinite(h)) continue;
            xs.push_back(std::log(static_cast<double>(surface.scales[si])));
            ys.push_back(h);
        }
        const std::size_t m = xs.size();
        if (m < 3) {
            pt.delta = pt.std_error = pt.ci_low = pt.ci_high = pt.r_squared =
                pt.intercept = kNaN;
            pt.valid = false;
            result.points.push_back(pt);
            continue;
        }
        const double xb = num::mean(xs), yb = num::mean(ys);
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sxx += (xs[i] - xb) * (xs[i] - xb);
            sxy += (xs[i] - xb) * (ys[i] - yb);
        }
        pt.delta = sxy / sxx;
        pt.intercept = yb - pt.delta * xb;
        double ss_res = 0.0, ss_tot = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double fit = pt.intercept + pt.delta * xs[i];
            ss_res += (ys[i] - fit) * (ys[i] - fit);
            ss_tot += (ys[i] - yb) * (ys[i] - yb);
        }
        pt.r_squared = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot : 1.0;
        pt.r_squared = std::clamp(pt.r_squared, 0.0, 1.0);
        const int dof = static_cast<int>(m) - 2;
        pt.std_error = std::sqrt(std::max(ss_res, 0.0) / dof / sxx);
        const double tq =
            num::student_t_quantile(1.0 - 0.5 * (1.0 - ci_level), dof);
        pt.ci_low = pt.delta - tq * pt.std_error;
        pt.ci_high = pt.delta + tq * pt.std_error;
        pt.valid = true;
        result.points.push_back(pt);
    }
    return result;
}

std::vector<LegendrePoint> legendre_spectrum(const SpectrumResult& result,
                                             const QGrid& q_grid) {
    const auto& qs = q_grid.values();
    if (qs.size() < 3) {
        throw config_error("legendre_spectrum needs at least 3 grid points");
    }
    if (result.points.size() != qs.size()) {
        throw data_error("spectrum result does not match the q grid");
    }
    const std::size_t n = qs.size();
    std::vector<double> tau(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = result.points[j].valid ? result.points[j].delta : kNaN;
        tau[j] = (qs[j] - 1.0) * d;
    }
    std::vector<LegendrePoint> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t a = j == 0 ? 0 : j - 1;
        const std::size_t b = j == n - 1 ? n - 1 : j + 1;
        out[j].tau = tau[j];
        out[j].alpha = (tau[b] - tau[a]) / (qs[b] - qs[a]);
        out[j].f_alpha = qs[j] * out[j].alpha - tau[j];
        out[j].d_q = result.points[j].valid ? result.points[j].delta : kNaN;
    }
    return out;
}

}  // namespace mfdea
