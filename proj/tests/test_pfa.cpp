#include <catch_amalgamated.hpp>

#include <cmath>

#include "oscfar/error.hpp"
#include "oscfar/pfa.hpp"

using namespace oscfar;

namespace {

DetectorConfig cfg(int N, int M, int n, int k, double tau) {
    return DetectorConfig{{N, M, n, k}, tau};
}

// The double binomial sum exactly as written (1 - S over i = k..M, l = 0..i),
// in long double with lgamma ratios. Independent of the grouped evaluation
// used by multipulse_os_pfa; only usable where cancellation is mild.
double literal_double_sum(int N, int M, int n, int k, double tau) {
    long double s = 0.0L;
    for (int i = k; i <= M; ++i) {
        for (int l = 0; l <= i; ++l) {
            const int m = M - i + l;
            const long double lg = std::lgamma(static_cast<long double>(N) + 1) -
                                   std::lgamma(static_cast<long double>(N - n) + 1) +
                                   std::lgamma(N - n + static_cast<long double>(tau) * m + 1) -
                                   std::lgamma(N + static_cast<long double>(tau) * m);
            const long double c = std::tgamma(static_cast<long double>(M) + 1) /
                                  (std::tgamma(static_cast<long double>(M - i) + 1) *
                                   std::tgamma(static_cast<long double>(l) + 1) *
                                   std::tgamma(static_cast<long double>(i - l) + 1));
            s += (l % 2 == 0 ? 1 : -1) * c * std::exp(lg) / (N + m);
        }
    }
    return static_cast<double>(1.0L - s);
}

}  // namespace

TEST_CASE("DetectorConfig validation names the offending field", "[pfa]") {
    auto field_of = [](const DetectorConfig& c) {
        try {
            c.validate();
        } catch (const InvalidArgument& e) {
            return e.field();
        }
        return std::string{};
    };
    CHECK(field_of(cfg(8, 2, 1, 1, 1.0)) == "n");
    CHECK(field_of(cfg(8, 2, 9, 1, 1.0)) == "n");
    CHECK(field_of(cfg(8, 2, 4, 0, 1.0)) == "k");
    CHECK(field_of(cfg(8, 2, 4, 3, 1.0)) == "k");
    CHECK(field_of(cfg(8, 0, 4, 1, 1.0)) == "M");
    CHECK(field_of(cfg(1, 1, 1, 1, 1.0)) == "N");
    CHECK(field_of(cfg(8, 2, 4, 1, -0.1)) == "tau");
    CHECK(field_of(cfg(8, 2, 4, 1, INFINITY)) == "tau");
    CHECK(field_of(cfg(8, 2, 8, 2, 0.0)).empty());
}

TEST_CASE("single_pulse_os_pfa anchors", "[pfa]") {
    CHECK(single_pulse_os_pfa(4, 4, 1.0).value == Catch::Approx(0.2).epsilon(1e-15));
    CHECK(single_pulse_os_pfa(4, 2, 0.0).value == Catch::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(single_pulse_os_pfa(4, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(single_pulse_os_pfa(4, 5, 1.0), InvalidArgument);
    CHECK_THROWS_AS(single_pulse_os_pfa(4, 2, -1.0), InvalidArgument);

    // 40-digit reference: N!/((N+1)(N-k)!) Gamma(tau+N-k+1)/Gamma(tau+N) = 2/27.
    CHECK(single_pulse_os_pfa(8, 6, 3.0).value == Catch::Approx(2.0 / 27.0).epsilon(1e-14));

    SECTION("strictly decreasing in tau") {
        double prev = 2.0;
        for (double tau = 0.0; tau <= 20.0; tau += 0.25) {
            const double v = single_pulse_os_pfa(20, 11, tau).value;
            REQUIRE(v < prev);
            prev = v;
        }
    }

    SECTION("large-rank lgamma fallback matches the telescoped product") {
        // Rank 5000 > product limit; compare against a long-double product.
        const int N = 6000;
        const int k = 5000;
        const double tau = 0.3;
        long double ref = static_cast<long double>(N) / (N + 1);
        for (int j = 1; j < k; ++j) {
            ref *= static_cast<long double>(N - j) / (N - j + tau);
        }
        CHECK(single_pulse_os_pfa(N, k, tau).value ==
              Catch::Approx(static_cast<double>(ref)).epsilon(1e-9));
    }
}

TEST_CASE("multipulse_os_pfa matches high-precision references", "[pfa]") {
    // Frozen from tests/oracles/pfa_reference.py: an mpmath double integral of
    // P(X_(k) > T + tau Q) that agrees with the exact closed form to ~1e-40.
    struct Case {
        int N, M, n, k;
        double tau;
        double expected;
    };
    const Case cases[] = {
        {16, 1, 5, 1, 2.5, 0.4751090040627435118},
        {12, 3, 10, 2, 1.7, 0.041266624111562870321},
        {8, 4, 6, 3, 0.0, 0.98181818181818181818},
        {8, 1, 6, 1, 3.0, 0.074074074074074074074},
        {4, 2, 3, 2, 0.5, 0.76380952380952380952},
        {32, 8, 20, 5, 5.0, 0.00012699886745432261667},
    };
    for (const auto& c : cases) {
        CAPTURE(c.N, c.M, c.n, c.k, c.tau);
        const auto v = multipulse_os_pfa(cfg(c.N, c.M, c.n, c.k, c.tau));
        CHECK(v.value == Catch::Approx(c.expected).epsilon(1e-13));
        CHECK(v.method == PfaMethod::analytic);
        CHECK(v.condition_estimate >= 1.0);
        CHECK_FALSE(v.ill_conditioned());
    }
}

TEST_CASE("grouped evaluation equals the literal double sum", "[pfa]") {
    for (int N : {4, 9, 20}) {
        for (int M : {1, 2, 3, 5}) {
            for (int n = 2; n <= N; n += 3) {
                for (int k = 1; k <= M; ++k) {
                    for (double tau : {0.0, 0.4, 1.0, 2.7}) {
                        CAPTURE(N, M, n, k, tau);
                        const double v = multipulse_os_pfa(cfg(N, M, n, k, tau)).value;
                        REQUIRE(v == Catch::Approx(literal_double_sum(N, M, n, k, tau)).margin(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("M = 1, k = 1 reduces to the single-pulse formula", "[pfa]") {
    CHECK(multipulse_os_pfa(cfg(16, 1, 5, 1, 2.5)).value ==
          Catch::Approx(single_pulse_os_pfa(16, 5, 2.5).value).epsilon(1e-12));
    for (int N = 2; N <= 64; N += 7) {
        for (int n = 2; n <= N; n += 3) {
            for (double tau : {0.0, 0.5, 3.0, 10.0, 50.0}) {
                const double single = single_pulse_os_pfa(N, n, tau).value;
                const double multi = multipulse_os_pfa(cfg(N, 1, n, 1, tau)).value;
                REQUIRE(std::fabs(multi - single) <= 1e-12 * single);
            }
        }
    }
}

TEST_CASE("multipulse_os_pfa properties", "[pfa]") {
    SECTION("tau = 0 value does not depend on n") {
        for (int M : {1, 3, 6}) {
            for (int k = 1; k <= M; ++k) {
                const double base = multipulse_os_pfa(cfg(12, M, 2, k, 0.0)).value;
                for (int n = 3; n <= 12; ++n) {
                    REQUIRE(multipulse_os_pfa(cfg(12, M, n, k, 0.0)).value == base);
                }
            }
        }
    }

    SECTION("strictly decreasing in tau") {
        const auto g = cfg(24, 6, 18, 4, 0.0);
        double prev = 2.0;
        for (int i = 0; i <= 100; ++i) {
            auto c = g;
            c.tau = 0.1 * i;
            const double v = multipulse_os_pfa(c).value;
            REQUIRE(v < prev);
            prev = v;
        }
    }

    SECTION("large tau stays representable") {
        const auto v = multipulse_os_pfa(cfg(64, 4, 60, 2, 50.0));
        CHECK(v.value > 0.0);
        CHECK(v.value < 1e-20);
    }

    SECTION("k = M is the maximum of M duals") {
        // P(max > S) = 1 - E[(1 - e^-S)^M]; M = 2 gives 2 g(1) - g(2).
        const double g1 = multipulse_os_pfa(cfg(10, 1, 4, 1, 1.5)).value;
        const double g2 = multipulse_os_pfa(cfg(10, 2, 4, 1, 1.5)).value;
        CHECK(multipulse_os_pfa(cfg(10, 2, 4, 2, 1.5)).value ==
              Catch::Approx(2 * g1 - g2).epsilon(1e-14));
    }
}

TEST_CASE("cancellation is detected", "[pfa]") {
    // k = M = 60 at tau = 0 sums 2^60 - 1 worth of alternating coefficients.
    bool flagged = false;
    try {
        const auto v = multipulse_os_pfa(cfg(64, 60, 30, 60, 0.0));
        flagged = v.ill_conditioned();
        CHECK(v.condition_estimate > PfaValue::kIllConditioned);
    } catch (const CancellationError& e) {
        flagged = true;
        CHECK(e.condition_estimate > PfaValue::kIllConditioned);
    }
    CHECK(flagged);
}
