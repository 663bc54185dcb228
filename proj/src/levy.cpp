#include "mfdea/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mfdea/numerics.hpp"

namespace mfdea {

namespace {

constexpr double kEnvelopeCutoff = 1e-13;  // exp(-s K^mu) at the upper limit

// Derivatives of the envelope g(k) = exp(-s k^mu) stay of the form
// P(k) exp(-s k^mu) with P a sum of real-power monomials; the recursion is
// P_{n+1} = P_n' - s mu k^{mu-1} P_n.
struct PowerPoly {
    std::vector<std::pair<double, double>> terms;  // (coefficient, power)

    double eval(double k) const {
        double v = 0.0;
        for (const auto& [c, p] : terms) v += c * std::pow(k, p);
        return v;
    }
};

PowerPoly envelope_derivative(const PowerPoly& poly, double s, double mu) {
    PowerPoly out;
    for (const auto& [c, p] : poly.terms) {
        if (c == 0.0) continue;
        if (p != 0.0) out.terms.emplace_back(c * p, p - 1.0);
        out.terms.emplace_back(-c * s * mu, p + mu - 1.0);
    }
    return out;
}

// integral_a^b cos(kx) g(k) dk by repeated integration by parts, valid when
// the envelope varies slowly against the oscillation (a x >> 1):
//   I(g) = B(g) - B(g'')/x^2 + B(g'''')/x^4 - ...,
//   B(f) = [f sin(kx)/x + f' cos(kx)/x^2]_a^b.
double cosine_tail_by_parts(double a, double b, double x, double s, double mu) {
    PowerPoly d[6];
    d[0].terms = {{1.0, 0.0}};
    for (int n = 1; n < 6; ++n) d[n] = envelope_derivative(d[n - 1], s, mu);
    const auto boundary = [&](const PowerPoly& f, const PowerPoly& fp) {
        const auto at = [&](double k) {
            const double g = std::exp(-s * std::pow(k, mu));
            return f.eval(k) * g * std::sin(k * x) / x +
                   fp.eval(k) * g * std::cos(k * x) / (x * x);
        };
        return at(b) - at(a);
    };
    const double x2 = x * x;
    return boundary(d[0], d[1]) - boundary(d[2], d[3]) / x2 +
           boundary(d[4], d[5]) / (x2 * x2);
}

}  // namespace

void StableParams::validate() const {
    if (!(mu > 0.0) || mu > 2.0) {
        throw data_error("stability index must lie in (0, 2]");
    }
    if (!(scale > 0.0)) throw data_error("Levy scale parameter must be positive");
}

double stable_pdf_quadrature(double x, const StableParams& params) {
    params.validate();
    const double s = params.scale;
    const double mu = params.mu;
    const double ax = std::abs(x);
    const double cutoff = std::pow(-std::log(kEnvelopeCutoff) / s, 1.0 / mu);
    const auto f = [&](double k) {
        return std::cos(k * ax) * std::exp(-s * std::pow(k, mu));
    };
    // For mu < 1 the envelope has a steep power cusp at k = 0 that direct
    // subdivision cannot resolve; u = k^mu turns the first piece into a
    // smooth integrand (the Jacobian exponent 1/mu - 1 is positive).
    const auto leading_piece = [&](double b) {
        if (mu >= 1.0) return num::integrate(f, 0.0, b, 1e-14, 1e-12);
        const double inv_mu = 1.0 / mu;
        const auto g = [&](double u) {
            const double k = std::pow(u, inv_mu);
            return std::cos(k * ax) * std::exp(-s * u) * inv_mu *
                   std::pow(u, inv_mu - 1.0);
        };
        return num::integrate(g, 0.0, std::pow(b, mu), 1e-14, 1e-12);
    };
    double value;
    if (ax * cutoff < M_PI) {
        // No interior cosine zero worth splitting at.
        value = leading_piece(cutoff);
    } else {
        // Integrate between consecutive zeros of cos(kx): each panel has a
        // single-signed integrand, so there is no internal cancellation.
        // Beyond ~100 half-periods the envelope is slowly varying against the
        // oscillation and the boundary-term expansion takes over; this keeps
        // the cost independent of x (the cutoff grows like 30^{1/mu}).
        const double half_period = M_PI / ax;
        constexpr int kQuadSegments = 97;
        num::KahanSum acc;
        double prev = 0.0;
        bool reached_cutoff = false;
        for (int j = 0; j < kQuadSegments; ++j) {
            const double z = (j + 0.5) * half_period;
            if (z >= cutoff) {
                reached_cutoff = true;
                break;
            }
            acc.add(j == 0 ? leading_piece(z)
                           : num::integrate(f, prev, z, 1e-15, 1e-12));
            prev = z;
        }
        if (prev < cutoff) {
            if (reached_cutoff) {
                acc.add(num::integrate(f, prev, cutoff, 1e-15, 1e-12));
            } else {
                acc.add(cosine_tail_by_parts(prev, cutoff, ax, s, mu));
            }
        }
        value = acc.value();
    }
    return std::max(value / M_PI, 0.0);
}

double stable_pdf(double x, const StableParams& params) {
    params.validate();
    if (std::abs(params.mu - 2.0) < 1e-12) {
        // Fourier pair of exp(-s k^2): Gaussian with variance 2s.
        return std::exp(-x * x / (4.0 * params.scale)) /
               std::sqrt(4.0 * M_PI * params.scale);
    }
    if (std::abs(params.mu - 1.0) < 1e-12) {
        return params.scale /
               (M_PI * (params.scale * params.scale + x * x));
    }
    return stable_pdf_quadrature(x, params);
}

std::vector<double> stable_sample(const StableParams& params, std::size_t n,
                                  std::uint64_t seed) {
    params.validate();
    const double mu = params.mu;
    const double amplitude = std::pow(params.scale, 1.0 / mu);
    num::Rng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = M_PI * (rng.uniform() - 0.5);
        double w = -std::log(rng.uniform_pos());
        if (w < 1e-300) w = 1e-300;
        const double a =
            std::sin(mu * theta) / std::pow(std::cos(theta), 1.0 / mu);
        const double b =
            std::pow(std::cos((1.0 - mu) * theta) / w, (1.0 - mu) / mu);
        out[i] = amplitude * a * b;
    }
    return out;
}

MuProfile::MuProfile(std::vector<std::pair<std::int64_t, double>> table)
    : table_(std::move(table)) {
    if (table_.empty()) throw data_error("mu profile must not be empty");
    std::int64_t prev = 0;
    for (const auto& [scale, mu] : table_) {
        if (scale <= prev) {
            throw data_error("mu profile scales must be positive and increasing");
        }
        if (!(mu > 0.0) || mu > 2.0) {
            throw data_error("mu profile values must lie in (0, 2]");
        }
        prev = scale;
    }
}

MuProfile MuProfile::constant(double mu) { return MuProfile({{1, mu}}); }

MuProfile MuProfile::parse(const std::string& text) {
    std::vector<std::pair<std::int64_t, double>> table;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw config_error("mu profile entry '" + item +
                               "' is not of the form scale:mu");
        }
        try {
            table.emplace_back(std::stoll(item.substr(0, colon)),
                               std::stod(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw config_error("cannot parse mu profile entry '" + item + "'");
        }
    }
    if (table.empty()) throw config_error("empty mu profile");
    std::sort(table.begin(), table.end());
    return MuProfile(std::move(table));
}

double MuProfile::at(std::int64_t scale) const {
    double mu = table_.front().second;
    for (const auto& [s, m] : table_) {
        if (s > scale) break;
        mu = m;
    }
    return mu;
}

TimeSeries generate_multiscale(const MuProfile& profile, std::int64_t window,
                               std::int64_t horizon, std::uint64_t seed) {
    if (window < 1) throw data_error("window scale must be positive");
    if (horizon < 1 || horizon % window != 0) {
        throw data_error("horizon must be a positive multiple of the window");
    }
    const double mu = profile.at(window);
    const std::size_t m = static_cast<std::size_t>(horizon / window);
    std::vector<double> draws = stable_sample({mu, 1.0}, m, seed);
    const double amplitude = std::pow(static_cast<double>(window), 1.0 / mu);
    for (double& d : draws) d *= amplitude;
    return TimeSeries(std::move(draws), static_cast<double>(window));
}

// ---------------------------------------------------------------------------
// Stationarity condition
// ---------------------------------------------------------------------------

namespace {

// Leading power-tail coefficients: L_{1,mu}(x) ~ sum_n a_n x^{-(n mu + 1)}.
void bergstrom_coefficients(double mu, double out[3]) {
    double sign = 1.0;
    double fact = 1.0;
    for (int n = 1; n <= 3; ++n) {
        fact *= n;
        out[n - 1] = sign * std::tgamma(n * mu + 1.0) *
                     std::sin(0.5 * n * M_PI * mu) / (M_PI * fact);
        sign = -sign;
    }
}

}  // namespace

StationarityCondition::StationarityCondition(double mu, StationarityOptions opt)
    : mu_(mu), opt_(opt) {
    if (!(mu > 0.0) || !(mu < 2.0)) {
        throw data_error("stationarity condition needs mu strictly inside (0, 2)");
    }
    step_ = std::min({opt_.mu_step, 0.5 * mu, 0.5 * (2.0 - mu)});
    mu_variant_[0] = mu;
    mu_variant_[1] = mu - step_;
    mu_variant_[2] = mu + step_;
    for (int v = 0; v < 3; ++v) {
        bergstrom_coefficients(mu_variant_[v], tail_a_[v]);
    }

    // Switch to the analytic tail once the second and third series terms are
    // small fractions of the first.
    const double a1 = tail_a_[0][0];
    const double r2 = std::abs(tail_a_[0][1] / a1);
    const double r3 = std::abs(tail_a_[0][2] / a1);
    x_switch_ = std::max({30.0, std::pow(r2 / 0.06, 1.0 / mu),
                          std::pow(r3 / 0.03, 1.0 / (2.0 * mu))});

    // Composite panels, geometric from the mode outward. The first panel must
    // resolve both the central peak of the density (curvature scale 1/sqrt(c)
    // with c = |L''(0)| / (2 L(0)) = Gamma(3/mu) / (2 Gamma(1/mu)), which is
    // huge for small mu) and the width ~1/sqrt(q c) on which L^q concentrates.
    const double log_c = std::lgamma(3.0 / mu) - std::log(2.0) -
                         std::lgamma(1.0 / mu);
    const double w_min = std::min(
        0.05, 0.5 / std::sqrt(std::exp(log_c) * std::max(opt_.q_max, 4.0)));
    std::vector<double> edges = {0.0, w_min};
    double x = w_min;
    while (x < x_switch_) {
        x = std::min(x * 1.6, x_switch_);
        edges.push_back(x);
    }
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double hl = 0.5 * (edges[p + 1] - edges[p]);
        nodes_.push_back(mid);
        log_weights_.push_back(std::log(num::kGk15Weights[7] * hl));
        for (int i = 0; i < 7; ++i) {
            const double w = std::log(num::kGk15Weights[i] * hl);
            nodes_.push_back(mid - hl * num::kGk15Nodes[i]);
            log_weights_.push_back(w);
            nodes_.push_back(mid + hl * num::kGk15Nodes[i]);
            log_weights_.push_back(w);
        }
    }
    for (int v = 0; v < 3; ++v) {
        log_pdf_[v].resize(nodes_.size());
        const StableParams params{mu_variant_[v], 1.0};
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const double pdf = stable_pdf_quadrature(nodes_[i], params);
            if (!(pdf > 0.0)) {
                throw numeric_error("stable pdf vanished at x = " +
                                    std::to_string(nodes_[i]));
            }
            log_pdf_[v][i] = std::log(pdf);
        }
    }
}

double StationarityCondition::log_phi(int variant, double q) const {
    const double muv = mu_variant_[variant];
    if (!(q > 1.0 / (1.0 + muv))) {
        throw numeric_error("int L^q diverges for q <= 1/(1+mu)");
    }
    const auto& lp = log_pdf_[variant];
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lp.size(); ++i) {
        m = std::max(m, log_weights_[i] + q * lp[i]);
    }
    num::KahanSum sum;
    for (std::size_t i = 0; i < lp.size(); ++i) {
        sum.add(std::exp(log_weights_[i] + q * lp[i] - m));
    }

    // Analytic completion over [x_switch, inf): integrate the three-term
    // power expansion of L^q term by term.
    const double a1 = tail_a_[variant][0];
    const double c2 = tail_a_[variant][1] / a1;
    const double c3 = tail_a_[variant][2] / a1;
    const double e1 = (1.0 + muv) * q - 1.0;  // > 0 here
    const double lx = std::log(x_switch_);
    const double log_t1 = q * std::log(a1) - e1 * lx - std::log(e1);
    const double pow_mu = std::exp(-muv * lx);
    const double r2 = q * c2 * pow_mu * e1 / (e1 + muv);
    const double r3 = (q * c3 + 0.5 * q * (q - 1.0) * c2 * c2) * pow_mu *
                      pow_mu * e1 / (e1 + 2.0 * muv);
    double corr = 1.0 + r2 + r3;
    double tail_scaled = 0.0;
    if (corr > 0.0) tail_scaled = std::exp(log_t1 + std::log(corr) - m);
    if (tail_scaled > 0.05 * sum.value() &&
        (std::abs(r2) > 0.2 || std::abs(r3) > 0.1)) {
        throw numeric_error("power-tail expansion unreliable at q = " +
                            std::to_string(q));
    }
    return m + std::log(sum.value() + tail_scaled) + std::log(2.0);
}

double StationarityCondition::power_integral(double q) const {
    return std::exp(log_phi(0, q));
}

double StationarityCondition::bracket(double q, std::int64_t t) const {
    if (t < 2) throw data_error("time horizon must be an integer >= 2");
    if (!(q > 1.0)) throw data_error("bracket is evaluated for q > 1");
    const double lc = log_phi(0, q);
    const double lm = log_phi(1, q);
    const double lp = log_phi(2, q);
    // (1/q) d/dmu ln-free ratio: int (dL/dmu) L^{q-1} / int L^q.
    const double ratio =
        (std::exp(lp - lc) - std::exp(lm - lc)) / (2.0 * step_ * q);
    return std::log(static_cast<double>(t)) / (mu_ * mu_) -
           q / (1.0 - q) * ratio;
}

std::optional<double> StationarityCondition::solve(std::int64_t t) const {
    const double lo = opt_.q_min - 1.0;
    const double hi = opt_.q_max - 1.0;
    const int n = std::max(opt_.scan_points, 8);
    const double growth = std::pow(hi / lo, 1.0 / (n - 1));
    double q_prev = 1.0 + lo;
    double b_prev = bracket(q_prev, t);
    for (int i = 1; i < n; ++i) {
        const double q = 1.0 + lo * std::pow(growth, i);
        const double b = bracket(q, t);
        if (std::isfinite(b_prev) && std::isfinite(b) &&
            ((b_prev < 0.0) != (b < 0.0))) {
            double a = q_prev, c = q;
            double ba = b_prev;
            for (int it = 0; it < 200 && (c - a) > 1e-13 * c; ++it) {
                const double mid = 0.5 * (a + c);
                const double bm = bracket(mid, t);
                if ((bm < 0.0) == (ba < 0.0)) {
                    a = mid;
                    ba = bm;
                } else {
                    c = mid;
                }
            }
            const double root = 0.5 * (a + c);
            if (std::abs(bracket(root, t)) < opt_.residual_tol) return root;
        }
        q_prev = q;
        b_prev = b;
    }
    return std::nullopt;
}

std::optional<double> solve_stationary_q(double mu, std::int64_t t,
                                         StationarityOptions opt) {
    return StationarityCondition(mu, opt).solve(t);
}

}  // namespace mfdea
