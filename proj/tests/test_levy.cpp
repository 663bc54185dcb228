#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mfdea/levy.hpp"
#include "mfdea/numerics.hpp"

using namespace mfdea;

TEST_CASE("stable parameter validation") {
    CHECK_THROWS_AS((StableParams{0.0, 1.0}.validate()), data_error);
    CHECK_THROWS_AS((StableParams{2.1, 1.0}.validate()), data_error);
    CHECK_THROWS_AS((StableParams{1.5, 0.0}.validate()), data_error);
    CHECK_NOTHROW((StableParams{2.0, 1.0}.validate()));
}

TEST_CASE("closed forms at the origin") {
    CHECK(stable_pdf(0.0, {2.0, 1.0}) ==
          doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-14));
    CHECK(stable_pdf(0.0, {2.0, 1.0}) == doctest::Approx(0.28209).epsilon(1e-4));
    CHECK(stable_pdf(0.0, {1.0, 1.0}) ==
          doctest::Approx(1.0 / M_PI).epsilon(1e-14));
}

TEST_CASE("quadrature matches an independent trapezoid oracle at the mode") {
    // brute-force trapezoid of (1/pi) int cos(0) exp(-k^1.5) dk
    const double upper = std::pow(32.0, 1.0 / 1.5);
    const std::size_t n = 2'000'000;
    const double step = upper / static_cast<double>(n);
    double acc = 0.5 * (1.0 + std::exp(-std::pow(upper, 1.5)));
    for (std::size_t i = 1; i < n; ++i) {
        acc += std::exp(-std::pow(step * static_cast<double>(i), 1.5));
    }
    const double oracle = acc * step / M_PI;
    CHECK(stable_pdf_quadrature(0.0, {1.5, 1.0}) ==
          doctest::Approx(oracle).epsilon(1e-6));
    // also equals Gamma(1 + 1/mu)/pi analytically
    CHECK(stable_pdf_quadrature(0.0, {1.5, 1.0}) ==
          doctest::Approx(std::tgamma(1.0 + 1.0 / 1.5) / M_PI).epsilon(1e-10));
}

TEST_CASE("generic quadrature agrees with the closed forms") {
    for (double x = -10.0; x <= 10.0; x += 0.5) {
        CHECK(stable_pdf_quadrature(x, {2.0, 1.0}) ==
              doctest::Approx(stable_pdf(x, {2.0, 1.0})).epsilon(1e-9));
        CHECK(std::abs(stable_pdf_quadrature(x, {1.0, 1.0}) -
                       stable_pdf(x, {1.0, 1.0})) < 1e-10);
        CHECK(std::abs(stable_pdf_quadrature(x, {1.0, 0.5}) -
                       stable_pdf(x, {1.0, 0.5})) < 1e-10);
    }
}

TEST_CASE("pdf is symmetric and self-similar in the scale parameter") {
    for (double mu : {0.7, 1.3, 1.8}) {
        for (double x : {0.3, 1.7, 4.0}) {
            const double plus = stable_pdf_quadrature(x, {mu, 1.0});
            const double minus = stable_pdf_quadrature(-x, {mu, 1.0});
            CHECK(plus == doctest::Approx(minus).epsilon(1e-10));
            // L_{s,mu}(x) = s^{-1/mu} L_{1,mu}(x s^{-1/mu})
            const double s = 3.0;
            const double lhs = stable_pdf_quadrature(x, {mu, s});
            const double f = std::pow(s, -1.0 / mu);
            CHECK(lhs == doctest::Approx(f * stable_pdf_quadrature(x * f, {mu, 1.0}))
                             .epsilon(1e-8));
        }
    }
}

TEST_CASE("far tail matches the leading power law") {
    for (double mu : {0.5, 1.2, 1.7}) {
        const double a1 = std::tgamma(mu + 1.0) * std::sin(0.5 * M_PI * mu) / M_PI;
        const double x = std::pow(200.0, 1.0 / mu);
        const double lead = a1 * std::pow(x, -(mu + 1.0));
        CHECK(stable_pdf_quadrature(x, {mu, 1.0}) ==
              doctest::Approx(lead).epsilon(0.05));
    }
}

TEST_CASE("sampling is deterministic and reproduces moments") {
    const auto a = stable_sample({1.5, 1.0}, 1000, 99);
    const auto b = stable_sample({1.5, 1.0}, 1000, 99);
    CHECK(a == b);
    const auto c = stable_sample({1.5, 1.0}, 1000, 100);
    CHECK(a != c);

    // mu = 2: Gaussian with variance 2s
    const double s = 0.7;
    const auto g = stable_sample({2.0, s}, 1'000'000, 7);
    double var = 0.0;
    for (double v : g) var += v * v;
    var /= static_cast<double>(g.size());
    CHECK(var == doctest::Approx(2.0 * s).epsilon(0.03));

    // mu = 1: Cauchy, median 0 and IQR 2s
    const auto cch = stable_sample({1.0, s}, 1'000'000, 8);
    CHECK(num::quantile_type7(cch, 0.5) == doctest::Approx(0.0).epsilon(0.01));
    CHECK(std::abs(num::quantile_type7(cch, 0.5)) < 0.01);
    CHECK(num::interquartile_range(cch) == doctest::Approx(2.0 * s).epsilon(0.03));
}

TEST_CASE("empirical characteristic function matches exp(-s|k|^mu)") {
    const double mu = 1.4, s = 1.0;
    const auto draws = stable_sample({mu, s}, 200'000, 17);
    for (double k : {0.5, 1.0, 2.0}) {
        double ecf = 0.0;
        for (double v : draws) ecf += std::cos(k * v);
        ecf /= static_cast<double>(draws.size());
        CHECK(ecf == doctest::Approx(std::exp(-s * std::pow(k, mu))).epsilon(0.02));
        CHECK(std::abs(ecf - std::exp(-s * std::pow(k, mu))) < 0.01);
    }
}

TEST_CASE("mu profile lookup and parsing") {
    const auto prof = MuProfile::parse("4:2.0,64:1.5");
    CHECK(prof.at(3) == 2.0);
    CHECK(prof.at(4) == 2.0);
    CHECK(prof.at(63) == 2.0);
    CHECK(prof.at(64) == 1.5);
    CHECK(prof.at(100000) == 1.5);
    CHECK(MuProfile::constant(1.2).at(77) == 1.2);
    CHECK_THROWS_AS(MuProfile::parse(""), config_error);
    CHECK_THROWS_AS(MuProfile::parse("4:3.0"), data_error);
    CHECK_THROWS_AS(MuProfile::parse("4=1.0"), config_error);
}

TEST_CASE("multiscale generator") {
    CHECK_THROWS_AS(generate_multiscale(MuProfile::constant(1.5), 4, 10, 1),
                    data_error);
    // m = 1: a single draw scaled by window^{1/mu}
    const auto one = generate_multiscale(MuProfile::constant(1.5), 8, 8, 5);
    REQUIRE(one.size() == 1);
    const auto base = stable_sample({1.5, 1.0}, 1, 5);
    CHECK(one.values()[0] ==
          doctest::Approx(std::pow(8.0, 1.0 / 1.5) * base[0]).epsilon(1e-14));
    CHECK(one.lag() == 8.0);

    // gaussian profile: increments have variance 2 * window
    const auto g = generate_multiscale(MuProfile::constant(2.0), 4, 4 * 200000, 6);
    CHECK(g.size() == 200000);
    double var = 0.0;
    for (double v : g.values()) var += v * v;
    var /= static_cast<double>(g.size());
    CHECK(var == doctest::Approx(2.0 * 4.0).epsilon(0.03));

    // reproducibility is bit exact
    const auto r1 = generate_multiscale(MuProfile::constant(1.3), 4, 64, 11);
    const auto r2 = generate_multiscale(MuProfile::constant(1.3), 4, 64, 11);
    CHECK(r1.values() == r2.values());
}

TEST_CASE("power integrals match closed forms for the Cauchy case") {
    // int L_{1,1}^q dx = pi^{1/2-q} Gamma(q-1/2) / Gamma(q)
    const StationarityCondition cond(1.0);
    for (double q : {1.5, 2.0, 3.0}) {
        const double closed = std::pow(M_PI, 0.5 - q) *
                              std::tgamma(q - 0.5) / std::tgamma(q);
        CHECK(cond.power_integral(q) == doctest::Approx(closed).epsilon(1e-6));
    }
    CHECK_THROWS_AS(cond.power_integral(0.4), numeric_error);
}

TEST_CASE("power integral against the Parseval closed form at q = 2") {
    // int L_{1,mu}^2 dx = Gamma(1 + 1/mu) 2^{-1/mu} / pi
    for (double mu : {0.35, 0.6, 1.0, 1.5, 1.9}) {
        const StationarityCondition cond(mu);
        const double closed =
            std::tgamma(1.0 + 1.0 / mu) * std::pow(2.0, -1.0 / mu) / M_PI;
        CHECK(cond.power_integral(2.0) == doctest::Approx(closed).epsilon(1e-6));
    }
}

TEST_CASE("power integral in mu: monotone for q < 1, non-monotone for q = 2") {
    // For q < 1 the integral decreases as mu grows (equivalently: grows with
    // the scaling exponent delta = 1/mu). Consistent with the q -> 1 limit,
    // where d/dq int L^q = int L ln L = -H(L) and the Shannon entropy is
    // higher for smaller mu. For q = 2 the Parseval form has a minimum at
    // psi(1 + 1/mu) = ln 2, i.e. mu ~ 0.69.
    std::vector<double> mus{0.6, 1.0, 1.4, 1.8};
    std::vector<double> low, high;
    for (double mu : mus) {
        const StationarityCondition cond(mu);
        low.push_back(cond.power_integral(0.8));
    }
    // gaussian endpoint closed form: int L_{1,2}^q = (4 pi)^{(1-q)/2} q^{-1/2}
    const auto gauss = [](double q) {
        return std::pow(4.0 * M_PI, 0.5 * (1.0 - q)) / std::sqrt(q);
    };
    low.push_back(gauss(0.8));
    for (std::size_t i = 0; i + 1 < low.size(); ++i) CHECK(low[i] > low[i + 1]);

    for (double mu : {0.35, 0.6, 1.0, 1.5}) {
        const StationarityCondition cond(mu);
        high.push_back(cond.power_integral(2.0));
    }
    high.push_back(gauss(2.0));
    bool decreases = false, increases = false;
    for (std::size_t i = 0; i + 1 < high.size(); ++i) {
        if (high[i + 1] < high[i]) decreases = true;
        if (high[i + 1] > high[i]) increases = true;
    }
    CHECK(decreases);
    CHECK(increases);
}

TEST_CASE("stationarity solver returns self-consistent roots") {
    const StationarityCondition cond(0.5);
    const auto root = cond.solve(2);
    REQUIRE(root.has_value());
    CHECK(*root > 1.0);
    CHECK(std::abs(cond.bracket(*root, 2)) < 1e-4);
}

TEST_CASE("stationarity solver reports unsolvable horizons honestly") {
    // at mu = 1.5 the large-q limit of the bracket is positive for t >= 2
    const StationarityCondition cond(1.5);
    CHECK_FALSE(cond.solve(64).has_value());
}

TEST_CASE("roots grow with the horizon at fixed mu") {
    const StationarityCondition cond(0.35);
    std::vector<double> roots;
    for (std::int64_t t : {2, 3}) {
        const auto q = cond.solve(t);
        if (q) roots.push_back(*q);
    }
    REQUIRE(roots.size() == 2);
    CHECK(roots[1] > roots[0]);
}
