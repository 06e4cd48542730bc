#include <doctest.h>

#include <cmath>
#include <complex>

#include "padicmv/counterexample.hpp"
#include "padicmv/errors.hpp"

using namespace padicmv;

namespace {

bool close(long double x, long double y, long double rel) { return std::fabs(x - y) <= rel * std::fabs(y); }

// ||F||_r^r straight from the definition on B = N^{-2} Z_p^3: F depends on
// (y_1, y_2) mod N^2 only, and each residue pair carries measure N^6 / N^4.
long double direct_norm_power(std::uint64_t p, unsigned k, long double r) {
    const auto fam = make_family(p, k, r);
    const long long N = fam.scale.N().get_si();
    const long long M = N * N;
    const long long xi = fam.xi.xi.get_si();
    const long double two_pi = 6.28318530717958647692528676655900577L;
    long double total = 0;
    for (long long y1 = 0; y1 < M; ++y1) {
        for (long long y2 = 0; y2 < M; ++y2) {
            std::complex<long double> S(0, 0);
            for (long long n = 0; n < N; ++n) {
                const long long t = ((n * xi) % M * y1 + n * y2) % M;
                S += std::polar(1.0L, two_pi * static_cast<long double>(t) / static_cast<long double>(M));
            }
            total += std::pow(std::abs(S), r);
        }
    }
    return total * static_cast<long double>(N * N);
}

}  // namespace

TEST_CASE("family construction") {
    CHECK_THROWS_AS(make_family(7, 1, 4), UnsupportedPrime);
    CHECK_THROWS_AS(make_family(3, 1, 4), UnsupportedPrime);
    CHECK_THROWS_AS(make_family(5, 1, 1.5L), InvalidInput);
    const auto fam = make_family(5, 2, 6);
    CHECK(fam.scale.N() == 25);
    // The lift is taken modulo N^2 = p^{2k}.
    CHECK(fam.xi.K == 4);
}

TEST_CASE("single norms") {
    CHECK(close(single_norm(make_family(5, 1, 6)), 5, 1e-18L));
    CHECK(close(single_norm(make_family(5, 1, 2)), 125, 1e-18L));
    CHECK(close(single_norm(make_family(13, 1, 3)), 169, 1e-18L));
}

TEST_CASE("r = 2 is orthogonal") {
    for (std::uint64_t p : {5ULL, 13ULL}) {
        for (unsigned k : {1u, 2u}) {
            const auto fam = make_family(p, k, 2);
            const long double N = static_cast<long double>(fam.scale.N().get_si());
            CHECK(close(sum_norm(fam), std::pow(N, 3.5L), 1e-15L));
            CHECK(close(decoupling_ratio(fam), 1, 1e-15L));
        }
    }
}

TEST_CASE("agreement with the direct residue sum") {
    for (long double r : {2.0L, 3.0L, 6.0L}) {
        CHECK(close(sum_norm_power(make_family(5, 1, r)), direct_norm_power(5, 1, r), 1e-12L));
    }
    CHECK(close(sum_norm_power(make_family(13, 1, 4)), direct_norm_power(13, 1, 4), 1e-12L));
}

TEST_CASE("elementary bounds") {
    for (long double r : {2.0L, 4.0L, 6.0L}) {
        const auto fam = make_family(5, 2, r);
        const long double N = 25;
        const long double v = sum_norm_power(fam);
        // The w = 0 term alone, and |F| <= N everywhere.
        CHECK(v >= std::pow(N, 4 + r) * (1 - 1e-15L));
        CHECK(v <= std::pow(N, 6 + r) * (1 + 1e-15L));
    }
}

TEST_CASE("log-convexity in r") {
    const long double p2 = std::log(sum_norm_power(make_family(5, 2, 2)));
    const long double p4 = std::log(sum_norm_power(make_family(5, 2, 4)));
    const long double p6 = std::log(sum_norm_power(make_family(5, 2, 6)));
    CHECK(2 * p4 <= p2 + p6);
}

TEST_CASE("paraboloid membership") {
    for (std::uint64_t p : {5ULL, 13ULL, 17ULL}) {
        for (unsigned k : {1u, 2u, 3u}) {
            const auto fam = make_family(p, k, 4);
            CHECK(verify_paraboloid_membership(fam));
            CHECK_FALSE(verify_paraboloid_membership(fam, fam.xi.xi + 1));
        }
    }
}

TEST_CASE("thread count does not change the result") {
    const auto fam = make_family(5, 3, 6);
    const long double one = sum_norm_power(fam, 1);
    CHECK(sum_norm_power(fam, 3) == one);
    CHECK(sum_norm_power(fam, 8) == one);
}

TEST_CASE("table") {
    const auto rows = counterexample_table(5, 2, {2, 6});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].k == 1);
    CHECK(rows[0].r == 2);
    CHECK(close(rows[0].ratio, 1, 1e-15L));
    CHECK(close(rows[1].log_ratio, std::log(rows[1].ratio), 1e-15L));
    const auto csv = counterexample_csv(rows);
    CHECK(csv.header == std::vector<std::string>{"p", "k", "N", "r", "single_norm", "sum_norm", "ratio", "log_ratio"});
    CHECK(csv.rows.size() == 4);
    CHECK(csv.rows[3][2] == "25");
}
