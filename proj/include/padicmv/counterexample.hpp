#pragma once

// The paraboloid family over Q_p^3, p = 1 mod 4, N = p^k:
//     f_n(x) = 1_{p^{-2k} Z_p^3}(x) chi_p(x . (n xi, n, 0)),   0 <= n < N,
// with xi^2 + 1 = 0 mod N^2.
//
// Reduction of the norm of F = sum_n f_n. On the ball B = p^{-2k} Z_p^3 write
// x = y / N^2 with y in Z_p^3; then F(x) = sum_n e(n t / N^2) with
// t = y_1 xi + y_2 mod N^2, and x_3 never enters. As (y_1, y_2) runs over
// (Z/N^2)^2 every residue w of t is hit exactly N^2 times, so
//     ||F||_r^r = mu(B) N^{-2} sum_{w mod N^2} |sum_{n<N} e(w n / N^2)|^r
// with mu(B) = N^6. The sum does not depend on xi; the lift only certifies
// that the frequencies lie on the paraboloid.

#include <cstdint>
#include <vector>

#include "padicmv/csv.hpp"
#include "padicmv/exact_arith.hpp"
#include "padicmv/padic.hpp"

namespace padicmv {

struct CounterexampleFamily {
    ScaleSpec scale;  ///< (p, k, N = p^k)
    HenselRoot xi;    ///< lift modulo N^2 = p^{2k}
    long double r = 2;
};

/// Throws UnsupportedPrime unless p = 1 mod 4, InvalidInput for r < 2.
CounterexampleFamily make_family(std::uint64_t p, unsigned k, long double r);

/// ||f_n||_r = N^{6/r}.
long double single_norm(const CounterexampleFamily& fam);

/// ||sum_n f_n||_r^r by the residue sum above. Parallel over w with a
/// deterministic reduction.
long double sum_norm_power(const CounterexampleFamily& fam, unsigned threads = 1);
long double sum_norm(const CounterexampleFamily& fam, unsigned threads = 1);

/// sum_norm / (N * N^{12/r})^{1/2}.
long double decoupling_ratio(const CounterexampleFamily& fam, unsigned threads = 1);

/// (n xi)^2 + n^2 = 0 mod N^2 for all 0 <= n < N.
bool verify_paraboloid_membership(const CounterexampleFamily& fam);
/// Same check for an arbitrary candidate xi.
bool verify_paraboloid_membership(const CounterexampleFamily& fam, const BigInt& xi);

struct CounterexampleRow {
    std::uint64_t p = 0;
    unsigned k = 0;
    BigInt N;
    long double r = 2;
    long double single = 0;
    long double sum = 0;
    long double ratio = 0;
    long double log_ratio = 0;
};

std::vector<CounterexampleRow> counterexample_table(std::uint64_t p, unsigned kmax,
                                                    const std::vector<long double>& rs, unsigned threads = 1);
/// Columns p, k, N, r, single_norm, sum_norm, ratio, log_ratio.
CsvTable counterexample_csv(const std::vector<CounterexampleRow>& rows);

}  // namespace padicmv
