#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "padicmv/errors.hpp"
#include "padicmv/vinogradov.hpp"

using namespace padicmv;

namespace {

// Independent count for d = 1 (the classical Vinogradov system) by
// tabulating power-sum vectors of s-tuples in an ordered map.
BigInt classical_count(unsigned s, unsigned k, std::uint64_t N) {
    std::map<std::vector<long long>, long long> mult;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < s; ++i) total *= N;
    for (std::uint64_t t = 0; t < total; ++t) {
        std::vector<long long> key(k, 0);
        std::uint64_t rest = t;
        for (unsigned i = 0; i < s; ++i) {
            const long long x = static_cast<long long>(rest % N);
            rest /= N;
            long long pw = 1;
            for (unsigned e = 0; e < k; ++e) {
                pw *= x;
                key[e] += pw;
            }
        }
        ++mult[key];
    }
    BigInt J;
    for (const auto& [key, m] : mult) J += BigInt(static_cast<long>(m)) * static_cast<long>(m);
    return J;
}

}  // namespace

TEST_CASE("s = 1 gives the diagonal") {
    for (const char* poly : {"1,0", "-2,0,0", "-2,0"}) {
        const auto P = MinimalPolynomial::parse(poly);
        for (std::uint64_t N : {2, 3, 5}) {
            const auto rec = count_solutions(P, 1, 2, N);
            CHECK(rec.J == bigint_pow(BigInt(static_cast<unsigned long>(N)), P.degree()));
        }
    }
}

TEST_CASE("small examples") {
    const auto gauss = MinimalPolynomial::parse("1,0");
    CHECK(count_solutions(gauss, 2, 2, 2).J == 28);
    CHECK(count_solutions_brute(gauss, 2, 2, 2).J == 28);
    CHECK(count_solutions(gauss, 1, 3, 2).J == 4);
    CHECK(count_solutions(gauss, 2, 2, 2).minpoly == "1,0");
}

TEST_CASE("d = 1 matches the classical count") {
    const auto P = MinimalPolynomial::parse("0");
    for (unsigned s : {1u, 2u, 3u}) {
        for (unsigned k : {1u, 2u, 3u}) {
            for (std::uint64_t N : {3, 6}) CHECK(count_solutions(P, s, k, N).J == classical_count(s, k, N));
        }
    }
}

TEST_CASE("hash and brute counts agree on the small grid") {
    for (const char* poly : {"1,0", "-2,0", "-2,0,0", "1,1,0"}) {
        const auto P = MinimalPolynomial::parse(poly);
        for (unsigned s : {1u, 2u}) {
            for (unsigned k : {1u, 2u, 3u}) {
                for (std::uint64_t N : {2, 3}) {
                    std::uint64_t tuples = 1;
                    for (unsigned i = 0; i < P.degree() * s; ++i) tuples *= N;
                    if (tuples * tuples > 100'000'000ULL) continue;
                    CHECK(count_solutions(P, s, k, N).J == count_solutions_brute(P, s, k, N).J);
                }
            }
        }
    }
}

TEST_CASE("rational coefficients") {
    // x^2 - 1/2 and x^2 - 2 generate the same field but different lattices.
    const auto half = MinimalPolynomial::parse("-1/2,0");
    const auto third = MinimalPolynomial::parse("1/3,-1/2,0");
    for (unsigned s : {1u, 2u}) {
        CHECK(count_solutions(half, s, 2, 3).J == count_solutions_brute(half, s, 2, 3).J);
        CHECK(count_solutions(third, s, 2, 2).J == count_solutions_brute(third, s, 2, 2).J);
    }
}

TEST_CASE("lower bounds and monotonicity") {
    const auto P = MinimalPolynomial::parse("-2,0,0");
    BigInt previous;
    for (std::uint64_t N : {1, 2, 3, 4}) {
        const auto J = count_solutions(P, 2, 2, N).J;
        CHECK(J >= bigint_pow(BigInt(static_cast<unsigned long>(N)), 6));
        CHECK(J >= previous);
        previous = J;
    }
    // Fewer equations, more solutions.
    CHECK(count_solutions(P, 2, 1, 3).J >= count_solutions(P, 2, 2, 3).J);
}

TEST_CASE("formal count is at most the reduced count") {
    for (const char* poly : {"1,0", "-2,0,0"}) {
        const auto P = MinimalPolynomial::parse(poly);
        for (unsigned k : {1u, 2u}) {
            const auto formal = count_solutions_formal(P.degree(), 2, k, 3);
            CHECK(formal.J <= count_solutions(P, 2, k, 3).J);
            CHECK(formal.J >= bigint_pow(BigInt(3), 2 * P.degree()));
            CHECK(formal.method == CountMethod::Formal);
            CHECK(formal.minpoly.empty());
        }
    }
    // d = 1: alpha^0 = 1 is the only monomial, so formal and reduced agree.
    CHECK(count_solutions_formal(1, 2, 2, 5).J == count_solutions(MinimalPolynomial::parse("0"), 2, 2, 5).J);
}

TEST_CASE("multi-pass counting gives the same result") {
    const auto P = MinimalPolynomial::parse("-2,0,0");
    CountOptions small;
    small.pass_size = 50;
    const auto ref = count_solutions(P, 2, 2, 3).J;
    CHECK(count_solutions(P, 2, 2, 3, small).J == ref);
    small.threads = 3;
    CHECK(count_solutions(P, 2, 2, 3, small).J == ref);
    CountOptions threaded;
    threaded.threads = 4;
    CHECK(count_solutions(P, 2, 2, 3, threaded).J == ref);
}

TEST_CASE("budgets and validation") {
    const auto P = MinimalPolynomial::parse("1,0");
    CountOptions tight;
    tight.key_budget = 100;
    CHECK_THROWS_AS(count_solutions(P, 2, 2, 4, tight), ResourceError);
    CHECK_THROWS_AS(count_solutions_brute(P, 2, 2, 20), ResourceError);
    CHECK_THROWS_AS(count_solutions(P, 0, 2, 4), InvalidInput);
    CHECK_THROWS_AS(count_solutions(P, 2, 0, 4), InvalidInput);
    CHECK_THROWS_AS(count_solutions(P, 2, 2, 0), InvalidInput);
    CHECK_THROWS_AS(fit_growth(P, 1, 1, {2, 3}), InvalidInput);
    CHECK_THROWS_AS(fit_growth(P, 1, 1, {2, 4, 3}), InvalidInput);
}

TEST_CASE("growth fits") {
    const auto P = MinimalPolynomial::parse("1,0");
    const auto fit = fit_growth(P, 1, 1, {2, 4, 8});
    // s = 1 gives J = N^2 exactly.
    CHECK(std::fabs(fit.slope - 2) < 1e-12L);
    CHECK(std::fabs(fit.intercept) < 1e-12L);
    CHECK(fit.points.size() == 3);
    CHECK(fit.envelope == 2);
    const auto line = fit_line({0, 1, 2}, {1, 3, 5});
    CHECK(std::fabs(line.slope - 2) < 1e-15L);
    CHECK(std::fabs(line.intercept - 1) < 1e-15L);
}

TEST_CASE("envelope") {
    CHECK(vinogradov_envelope(2, 2, 2) == 4);
    CHECK(vinogradov_envelope(2, 3, 2) == 6);
    CHECK(vinogradov_envelope(1, 6, 3) == 6);
    CHECK(vinogradov_envelope(1, 7, 3) == 8);
}

TEST_CASE("CSV output") {
    const auto P = MinimalPolynomial::parse("1,0");
    std::vector<SolutionCountRecord> recs{count_solutions(P, 2, 2, 2), count_solutions_brute(P, 2, 2, 2)};
    const auto table = solution_count_table(recs);
    std::ostringstream os;
    table.write(os);
    const std::string text = os.str();
    CHECK(text.find("d,s,k,N,minpoly,J,method,seconds") != std::string::npos);
    CHECK(text.find("2,2,2,2,x^2+1,28,hash,\n") != std::string::npos);
    CHECK(text.find("2,2,2,2,x^2+1,28,brute,\n") != std::string::npos);
}
