#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfdea/numerics.hpp"
#include "mfdea/time_series.hpp"

using namespace mfdea;

TEST_CASE("time series construction guards") {
    CHECK_THROWS_AS(TimeSeries({}), data_error);
    CHECK_THROWS_AS(TimeSeries({1.0, std::nan("")}), data_error);
    CHECK_THROWS_AS(TimeSeries({1.0, 2.0}, 0.0), data_error);
    const TimeSeries s({1.0, 2.0}, 0.5);
    CHECK(s.size() == 2);
    CHECK(s.lag() == 0.5);
}

TEST_CASE("window sums on tiny fixtures") {
    const TimeSeries s({1, 2, 3, 4});
    CHECK(window_sums(s, 2) == std::vector<double>{3, 5, 7});
    CHECK(window_sums(s, 2, Convention::compat_r) == std::vector<double>{3, 5});
    CHECK(window_sums(s, 4) == std::vector<double>{10});
    CHECK(window_sums(TimeSeries({5.0}), 1) == std::vector<double>{5.0});
    CHECK_THROWS_AS(window_sums(s, 5), data_error);
    CHECK_THROWS_AS(window_sums(s, 0), data_error);
    CHECK_THROWS_AS(window_sums(TimeSeries({5.0}), 1, Convention::compat_r),
                    data_error);
}

TEST_CASE("window counts follow the convention") {
    num::Rng rng(11);
    std::vector<double> v(257);
    for (double& x : v) x = rng.normal();
    const TimeSeries s(std::move(v));
    const ScaleSet scales({2, 5, 16, 100});
    const auto paper = collect_fluctuations(s, scales);
    const auto compat = collect_fluctuations(s, scales, Convention::compat_r);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const auto sc = static_cast<std::size_t>(scales.scales()[i]);
        CHECK(paper.entries()[i].sums.size() == s.size() - sc + 1);
        CHECK(compat.entries()[i].sums.size() == s.size() - sc);
    }
}

TEST_CASE("window sums match brute-force re-summation bit for bit") {
    num::Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform() * 25);
        std::vector<double> v(n);
        for (double& x : v) x = rng.normal();
        const TimeSeries s(v);
        for (std::int64_t scale : {1, 2, 3, 5, 7}) {
            if (static_cast<std::size_t>(scale) > n) continue;
            const auto sums = window_sums(s, scale);
            for (std::size_t k = 0; k < sums.size(); ++k) {
                double brute = 0.0;
                for (std::int64_t j = 0; j < scale; ++j) brute += v[k + j];
                CHECK(sums[k] == brute);
            }
        }
    }
}

TEST_CASE("adding a constant shifts every sum by scale times the constant") {
    num::Rng rng(5);
    std::vector<double> v(64), w(64);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = rng.normal();
        w[i] = v[i] + 2.5;
    }
    const auto a = window_sums(TimeSeries(v), 8);
    const auto b = window_sums(TimeSeries(w), 8);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(b[k] - a[k] == doctest::Approx(8 * 2.5).epsilon(1e-12));
    }
}

TEST_CASE("sums of 64 iid standard normals have sd near 8") {
    num::Rng rng(97);
    std::vector<double> v(16384);
    for (double& x : v) x = rng.normal();
    const auto sums = window_sums(TimeSeries(std::move(v)), 64);
    CHECK(sums.size() == 16384 - 64 + 1);
    CHECK(num::sample_sd(sums) == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("default scale sets") {
    const auto s16000 = default_scales(16000);
    CHECK(s16000.scales() ==
          std::vector<std::int64_t>{4, 8, 16, 32, 64, 128, 256, 512, 1024});
    CHECK(default_scales(128).scales() == std::vector<std::int64_t>{4, 8, 16});
    CHECK(default_scales(16384).scales().back() == 2048);
    CHECK_THROWS_AS(default_scales(127), data_error);
}

TEST_CASE("scale set invariants") {
    CHECK_THROWS_AS(ScaleSet({1, 2}), data_error);
    CHECK_THROWS_AS(ScaleSet({4, 4}), data_error);
    CHECK_THROWS_AS(ScaleSet({8, 4}), data_error);
    const ScaleSet ok({2, 4, 8});
    CHECK_THROWS_AS(ok.validate_for(8), data_error);
    CHECK_NOTHROW(ok.validate_for(9));
}

TEST_CASE("log returns") {
    const double e = std::exp(1.0);
    const auto r = log_returns(TimeSeries({1.0, e, e * e}));
    REQUIRE(r.size() == 2);
    CHECK(r.values()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.values()[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(log_returns(TimeSeries({100.0, 100.0})).values() ==
          std::vector<double>{0.0});
    const auto d = log_returns(TimeSeries({2.0, 1.0}));
    CHECK(d.values()[0] == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_returns(TimeSeries({1.0, -2.0, 3.0})), data_error);
    CHECK_THROWS_AS(log_returns(TimeSeries({1.0, 0.0})), data_error);
    CHECK_THROWS_AS(log_returns(TimeSeries({42.0})), data_error);
}
